#pragma once

// Subcommand implementations behind the spreadlab binary. Every report is a pure function of
// the parsed configuration except the wall_time_ms field.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spreadlab/core/error.hpp>
#include <spreadlab/core/rational.hpp>
#include <spreadlab/core/rng.hpp>
#include <spreadlab/diag/report.hpp>
#include <spreadlab/f2/serialize.hpp>
#include <spreadlab/games/battery.hpp>
#include <spreadlab/games/experiments.hpp>
#include <spreadlab/games/value.hpp>
#include <spreadlab/info/entropy.hpp>
#include <spreadlab/info/marginal.hpp>
#include <spreadlab/spread/algebraic.hpp>
#include <spreadlab/uniform/verify.hpp>
#include <spreadlab/version.hpp>

namespace spreadlab::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kInvalidInput = 1, kBudget = 2, kPostcondition = 3 };

inline std::string q(const Rational& r) { return to_string(r); }

inline json json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline f2::F2Set load_set(const std::string& path) {
    try {
        return f2::set_from_json(json_file(path));
    } catch (const json::exception& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

inline f2::AffineSubspace load_space(const std::string& path, int n) {
    if (path.empty()) return f2::AffineSubspace::full(n);
    f2::AffineSubspace V = [&] {
        try {
            return f2::subspace_from_json(json_file(path));
        } catch (const json::exception& e) {
            throw InputError("'" + path + "': " + e.what());
        }
    }();
    require(V.ambient_dim() == n, "subspace in '" + path + "' has the wrong ambient dimension");
    return V;
}

inline games::Game load_game(const std::string& path) {
    if (path.empty()) return games::make_ghz_game();
    return games::game_from_json(json_file(path));
}

inline json verdict_json(const spread::SpreadVerdict<f2::AffineSubspace>& v) {
    json j{{"passed", v.passed}, {"ratio", q(v.observed_ratio)}, {"coverage", spread::to_string(v.coverage)}};
    if (v.witness) j["witness"] = f2::subspace_to_json(*v.witness);
    return j;
}

// "exact" or "sampled:COUNT:SEED".
inline spread::SpreadMode parse_mode(const std::string& text) {
    if (text == "exact") return spread::SpreadMode::exact();
    if (text.rfind("sampled", 0) != 0) throw InputError("--mode must be 'exact' or 'sampled:COUNT:SEED'");
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 3 || parts[2].empty())
        throw InputError("--mode sampled needs an explicit seed: --mode sampled:COUNT:SEED");
    if (parts.size() != 3) throw InputError("--mode must be 'exact' or 'sampled:COUNT:SEED'");
    try {
        std::size_t used = 0;
        const auto count = std::stoull(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("count");
        const auto seed = std::stoull(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("seed");
        return spread::SpreadMode::sampled(count, seed);
    } catch (const std::logic_error&) {
        throw InputError("--mode sampled:COUNT:SEED needs integer COUNT and SEED");
    }
}

inline std::uint64_t need_seed(const CLI::Option* opt, std::uint64_t value, const std::string& why) {
    if (opt->count() == 0) throw InputError("--seed is required " + why);
    return value;
}

// --out: a path, or "json"/"csv" to select stdout in that format.
struct OutputSpec {
    std::string out;
    std::string format = "json";
    bool header = true;

    std::string resolved_format() const {
        if (out == "csv" || out == "json") return out;
        if (out.size() > 4 && out.substr(out.size() - 4) == ".csv") return "csv";
        return format;
    }
    bool to_stdout() const { return out.empty() || out == "csv" || out == "json"; }
};

struct Context {
    std::ostream& out;
    std::ostream& err;
};

inline void emit(const OutputSpec& spec, const std::string& text, Context& ctx) {
    if (spec.to_stdout()) {
        ctx.out << text;
        return;
    }
    std::ofstream f(spec.out);
    if (!f) throw InputError("cannot write '" + spec.out + "'");
    f << text;
}

inline json envelope(const std::string& command, json config, json result, double wall_ms) {
    return json{{"schema_version", kReportSchemaVersion},
                {"tool", "spreadlab"},
                {"version", kVersion},
                {"command", command},
                {"config", std::move(config)},
                {"result", std::move(result)},
                {"wall_time_ms", wall_ms}};
}

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string csv_join(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t k = 0; k < cells.size(); ++k) s += (k ? "," : "") + cells[k];
    return s + "\n";
}

inline std::string dbl(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---- spread-check ----

struct SpreadCheckArgs {
    std::string set, space, eps = "1/4", mode = "exact";
    int r = 1;
    std::uint64_t budget = spread::kDefaultSpreadBudget;
    OutputSpec output;
};

inline int spread_check(const SpreadCheckArgs& a, Context& ctx) {
    Stopwatch sw;
    const auto A = load_set(a.set);
    const auto V = load_space(a.space, A.ambient_dim());
    spread::SpreadParams p{a.r, parse_rational(a.eps), parse_mode(a.mode), a.budget};
    const auto v = spread::check_algebraic_spread(A, V, p);
    json config{{"set", a.set}, {"space", a.space.empty() ? json("full") : json(a.space)}, {"r", a.r},
                {"eps", q(p.epsilon)}, {"mode", a.mode}, {"budget", a.budget}};
    emit(a.output, envelope("spread-check", config, verdict_json(v), sw.ms()).dump(2) + "\n", ctx);
    return kOk;
}

// ---- square-cover ----

struct SquareCoverArgs {
    std::string x, y, z;
    std::uint64_t max_pairs = diag::kDefaultMaxPairs;
    OutputSpec output;
};

inline const std::vector<std::string> kSquareCoverCsvHeader = {
    "schema_version", "n",     "size_x",       "size_y",         "size_z", "diagonal_size", "triple_count",
    "alpha",          "dev_s", "dev_gamma_l1", "dev_gamma_l2sq", "dev_t",  "l1_mu_us",      "mean_nontrivial"};

inline int square_cover(const SquareCoverArgs& a, Context& ctx) {
    Stopwatch sw;
    const auto X = load_set(a.x), Y = load_set(a.y), Z = load_set(a.z);
    require(X.ambient_dim() == Y.ambient_dim() && Y.ambient_dim() == Z.ambient_dim(),
            "X, Y and Z must share an ambient dimension");
    const auto r = diag::counting_report(X, Y, Z, a.max_pairs);
    auto opt_q = [](const std::optional<Rational>& v) { return v ? json(q(*v)) : json(nullptr); };
    if (a.output.resolved_format() == "csv") {
        std::string text;
        if (a.output.header) text += csv_join(kSquareCoverCsvHeader);
        auto o = [](const std::optional<Rational>& v) { return v ? dbl(to_double(*v)) : std::string(); };
        text += csv_join({std::to_string(kCsvSchemaVersion), std::to_string(r.n), std::to_string(r.size_x),
                          std::to_string(r.size_y), std::to_string(r.size_z), std::to_string(r.diagonal_size),
                          std::to_string(r.triple_count), dbl(to_double(r.alpha)), dbl(to_double(r.dev_s)),
                          dbl(to_double(r.dev_gamma_l1)), dbl(to_double(r.dev_gamma_l2sq)), dbl(to_double(r.dev_t)),
                          o(r.l1_mu_us), o(r.mean_nontrivial)});
        emit(a.output, text, ctx);
        return kOk;
    }
    json result{
        {"sizes", {{"x", r.size_x}, {"y", r.size_y}, {"z", r.size_z}, {"diagonal", r.diagonal_size},
                   {"triples", r.triple_count}}},
        {"alphas", {{"x", q(r.alpha_x)}, {"y", q(r.alpha_y)}, {"z", q(r.alpha_z)}, {"product", q(r.alpha)}}},
        {"deviations",
         {{"s", q(r.dev_s)}, {"gamma_l1", q(r.dev_gamma_l1)}, {"gamma_l2sq", q(r.dev_gamma_l2sq)}, {"t", q(r.dev_t)}}},
        {"l1_mu_us", opt_q(r.l1_mu_us)},
        {"mu_l2sq", opt_q(r.mu_l2sq)},
        {"mean_nontrivial", opt_q(r.mean_nontrivial)},
        {"cauchy_schwarz_holds", r.cauchy_schwarz_holds()}};
    json config{{"x", a.x}, {"y", a.y}, {"z", a.z}, {"max_pairs", a.max_pairs}};
    emit(a.output, envelope("square-cover", config, result, sw.ms()).dump(2) + "\n", ctx);
    return kOk;
}

// ---- uniformize ----

struct UniformizeArgs {
    std::string x, y, z, space, eps = "1/4", eta = "1/5", depth = "auto", round_eps, round_eta;
    int r = 1;
    int r0 = -1;
    bool single_round = false;
    std::uint64_t budget = spread::kDefaultSpreadBudget;
    OutputSpec output;
};

inline json piece_json(const uniform::Piece& p) {
    json certs = json::array();
    for (const auto& c : p.certificates) certs.push_back(verdict_json(c));
    return json{{"space", f2::subspace_to_json(p.space)},
                {"dim", p.space.dim()},
                {"x_shift", p.x_shift},
                {"y_shift", p.y_shift},
                {"X", p.X},
                {"Y", p.Y},
                {"Z", p.Z},
                {"mass", p.mass},
                {"good", p.good},
                {"depth", p.depth},
                {"certificates", certs}};
}

inline json decomposition_json(const uniform::DecompositionResult& d) {
    json pieces = json::array();
    int min_dim = -1, max_dim = -1;
    for (const auto& p : d.pieces) {
        pieces.push_back(piece_json(p));
        min_dim = min_dim < 0 ? p.space.dim() : std::min(min_dim, p.space.dim());
        max_dim = std::max(max_dim, p.space.dim());
    }
    return json{{"total", d.total},
                {"covered", d.covered},
                {"remainder", d.remainder},
                {"good_mass", d.good_mass},
                {"good", d.good},
                {"rounds", d.rounds},
                {"piece_count", d.pieces.size()},
                {"dims", {{"min", min_dim}, {"max", max_dim}}},
                {"notes", d.notes},
                {"params",
                 {{"r", d.params.r},
                  {"eps", q(d.params.epsilon)},
                  {"eta", q(d.params.eta)},
                  {"cert_r", d.params.cert_r},
                  {"cert_eps", q(d.params.cert_epsilon)},
                  {"depth_cap", d.params.depth_cap}}},
                {"pieces", pieces}};
}

inline json verification_json(const uniform::VerificationReport& v) {
    return json{{"ok", v.ok()},
                {"failures", v.failures},
                {"pieces_checked", v.pieces_checked},
                {"total", v.total},
                {"covered", v.covered}};
}

inline int uniformize(const UniformizeArgs& a, Context& ctx) {
    Stopwatch sw;
    const auto X = load_set(a.x), Y = load_set(a.y), Z = load_set(a.z);
    require(X.ambient_dim() == Y.ambient_dim() && Y.ambient_dim() == Z.ambient_dim(),
            "X, Y and Z must share an ambient dimension");
    const auto V = load_space(a.space, X.ambient_dim());
    const Rational eps = parse_rational(a.eps), eta = parse_rational(a.eta);
    json config{{"x", a.x},     {"y", a.y},   {"z", a.z},         {"space", a.space.empty() ? json("full") : json(a.space)},
                {"r", a.r},     {"eps", q(eps)}, {"eta", q(eta)}, {"depth", a.depth},
                {"round", a.single_round}, {"budget", a.budget}};
    if (a.r0 >= 0) config["r0"] = a.r0;
    uniform::DecompositionResult d;
    std::optional<Rational> max_loss;
    int code = kOk;
    std::string failure;
    try {
        if (a.single_round) {
            uniform::RoundOptions ro;
            ro.budget = a.budget;
            if (a.r0 >= 0) ro.r0 = a.r0;
            auto rr = uniform::uniformize_three_sets_round(X, Y, Z, V, a.r, eps, eta, ro);
            d = std::move(rr.decomposition);
            max_loss = 8 * eta;
        } else {
            uniform::RecursiveOptions ro;
            ro.budget = a.budget;
            if (a.r0 >= 0) ro.r0 = a.r0;
            if (a.depth != "auto") {
                try {
                    ro.depth = std::stoi(a.depth);
                } catch (const std::logic_error&) {
                    throw InputError("--depth must be 'auto' or an integer");
                }
                require(*ro.depth >= 1, "--depth must be at least 1");
            }
            if (!a.round_eps.empty()) ro.round_epsilon = parse_rational(a.round_eps);
            if (!a.round_eta.empty()) ro.round_eta = parse_rational(a.round_eta);
            d = uniform::uniformize_recursive(X, Y, Z, V, a.r, eps, eta, ro);
        }
    } catch (const uniform::IncompleteDecomposition& e) {
        d = e.partial();
        code = kPostcondition;
        failure = e.what();
    }
    const auto v = uniform::verify_decomposition(d, X, Y, Z, V, {max_loss, true});
    if (!v.ok() && code == kOk) {
        code = kPostcondition;
        failure = "verification failed: " + v.failures.front();
    }
    json result = decomposition_json(d);
    result["verification"] = verification_json(v);
    if (!failure.empty()) result["error"] = failure;
    emit(a.output, envelope("uniformize", config, result, sw.ms()).dump(2) + "\n", ctx);
    if (code != kOk) ctx.err << "spreadlab: " << failure << "\n";
    return code;
}

// ---- game-value ----

struct GameValueArgs {
    std::string game;
    int reps = 1;
    std::uint64_t max_pairs = games::kDefaultValuePairs;
    bool json_report = false;
    OutputSpec output;
};

inline int game_value(const GameValueArgs& a, Context& ctx) {
    Stopwatch sw;
    require(a.reps >= 1, "--reps must be at least 1");
    const games::Game base = load_game(a.game);
    const games::Game G = a.reps == 1 ? base : games::explicit_repetition(base, a.reps);
    const auto v = games::game_value_bruteforce(G, a.max_pairs);
    if (!a.json_report) {
        std::string text = q(v.value) + "\n";
        emit(a.output, text, ctx);
        return kOk;
    }
    json config{{"game", a.game.empty() ? json("ghz") : json(a.game)}, {"reps", a.reps}, {"max_pairs", a.max_pairs}};
    json result{{"value", q(v.value)},
                {"value_approx", to_double(v.value)},
                {"witness", {{"f", v.witness.f}, {"g", v.witness.g}, {"h", v.witness.h}}}};
    emit(a.output, envelope("game-value", config, result, sw.ms()).dump(2) + "\n", ctx);
    return kOk;
}

// ---- hard-coordinate ----

struct BatteryArg {
    std::string text = "default";

    games::BatteryConfig config() const {
        if (text == "default") return {};
        try {
            std::size_t used = 0;
            const int k = std::stoi(text, &used);
            if (used == text.size()) return games::battery_of_size(k);
        } catch (const std::logic_error&) {
        }
        throw InputError("--battery must be 'default' or a member count");
    }
};

struct HardCoordinateArgs {
    std::string game, e, f, g, certify_eps = "1/4";
    int n = 10;
    int certify_r = 1;
    BatteryArg battery;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    OutputSpec output;
};

inline const std::vector<std::string> kHardCoordinateCsvHeader = {"schema_version", "strategy", "event_size",
                                                                  "mean_win", "max_coordinate_win"};

inline int hard_coordinate(const HardCoordinateArgs& a, Context& ctx) {
    Stopwatch sw;
    const std::uint64_t seed = need_seed(a.seed_opt, a.seed, "to build the strategy battery");
    const games::RepeatedGame G(load_game(a.game), a.n);
    const auto E = load_set(a.e), F = load_set(a.f), Gs = load_set(a.g);
    const auto battery = games::make_battery(G, a.battery.config(), seed);
    const auto V = f2::AffineSubspace::full(a.n);
    const Rational ceps = parse_rational(a.certify_eps);
    json certs = json::array();
    for (const f2::F2Set* A : {&E, &F, &Gs})
        certs.push_back(verdict_json(spread::check_algebraic_spread(*A, V, spread::SpreadParams{a.certify_r, ceps})));
    json rows = json::array();
    std::string csv = a.output.header ? csv_join(kHardCoordinateCsvHeader) : std::string();
    Rational best = 0;
    std::string best_name;
    std::uint64_t event_size = 0;
    for (const auto& s : battery) {
        const auto rep = games::conditional_win_experiment(G, *s, E, F, Gs);
        event_size = rep.event_size;
        const Rational top = *std::max_element(rep.per_coordinate.begin(), rep.per_coordinate.end());
        if (rep.mean > best || best_name.empty()) {
            best = rep.mean;
            best_name = s->name();
        }
        rows.push_back({{"strategy", s->name()}, {"mean_win", q(rep.mean)}, {"mean_win_approx", to_double(rep.mean)},
                        {"max_coordinate_win", q(top)}});
        csv += csv_join({std::to_string(kCsvSchemaVersion), s->name(), std::to_string(rep.event_size),
                         dbl(to_double(rep.mean)), dbl(to_double(top))});
    }
    if (a.output.resolved_format() == "csv") {
        emit(a.output, csv, ctx);
        return kOk;
    }
    json squares = nullptr;
    try {
        diag::DiagonalProduct S(E, F, Gs);
        diag::SquareProfileOptions opt;
        opt.per_coordinate = true;
        opt.weight_histogram = true;
        diag::SquareProfile P(S, opt);
        const auto stats = diag::nontrivial_coordinate_stats(P);
        const auto dist = diag::conditional_distances(P);
        squares = {{"mean_nontrivial", q(stats.mean)},
                   {"mean_nontrivial_fraction", to_double(stats.mean) / a.n},
                   {"conditional_l1_mean", q(dist.mean)},
                   {"excluded_coordinates", dist.excluded}};
    } catch (const NoSquaresError&) {
        squares = {{"note", "S(E, F, G) contains no squares"}};
    }
    json config{{"game", a.game.empty() ? json("ghz") : json(a.game)},
                {"n", a.n},
                {"e", a.e},
                {"f", a.f},
                {"g", a.g},
                {"battery", a.battery.text},
                {"battery_size", battery.size()},
                {"seed", seed},
                {"certify_r", a.certify_r},
                {"certify_eps", q(ceps)}};
    json result{{"event_size", event_size},
                {"certificates", certs},
                {"strategies", rows},
                {"max_mean_win", q(best)},
                {"max_mean_win_approx", to_double(best)},
                {"argmax", best_name},
                {"squares", squares}};
    emit(a.output, envelope("hard-coordinate", config, result, sw.ms()).dump(2) + "\n", ctx);
    return kOk;
}

// ---- concentration ----

struct ConcentrationArgs {
    std::string game, eps = "1/10";
    int n = 40;
    std::uint64_t trials = 100000;
    BatteryArg battery;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    OutputSpec output;
};

inline const std::vector<std::string> kConcentrationCsvHeader = {
    "schema_version", "strategy", "n",          "epsilon",     "threshold", "trials",
    "hits",           "frequency", "wilson_low", "wilson_high", "std_error", "chernoff_upper"};

inline int concentration(const ConcentrationArgs& a, Context& ctx) {
    Stopwatch sw;
    const std::uint64_t seed = need_seed(a.seed_opt, a.seed, "for the sampled concentration experiment");
    const games::RepeatedGame G(load_game(a.game), a.n);
    const Rational eps = parse_rational(a.eps);
    const auto battery = games::make_battery(G, a.battery.config(), seed);
    // Inputs use a stream separate from the battery's construction.
    const auto rep = games::concentration_experiment(G, battery, eps, a.trials, derive_seed(seed, 1u << 20));
    if (a.output.resolved_format() == "csv") {
        std::string text = a.output.header ? csv_join(kConcentrationCsvHeader) : std::string();
        for (const auto& row : rep.rows)
            text += csv_join({std::to_string(kCsvSchemaVersion), row.strategy, std::to_string(rep.n), q(rep.epsilon),
                              std::to_string(rep.threshold), std::to_string(row.trials), std::to_string(row.hits),
                              dbl(row.frequency), dbl(row.wilson.low), dbl(row.wilson.high), dbl(row.std_error),
                              dbl(rep.chernoff_upper)});
        emit(a.output, text, ctx);
        return kOk;
    }
    json rows = json::array();
    double max_freq = 0;
    for (const auto& row : rep.rows) {
        max_freq = std::max(max_freq, row.frequency);
        rows.push_back({{"strategy", row.strategy},
                        {"hits", row.hits},
                        {"trials", row.trials},
                        {"frequency", row.frequency},
                        {"wilson", {row.wilson.low, row.wilson.high}},
                        {"std_error", row.std_error}});
    }
    json config{{"game", a.game.empty() ? json("ghz") : json(a.game)}, {"n", a.n}, {"eps", q(eps)},
                {"trials", a.trials}, {"battery", a.battery.text}, {"seed", seed}};
    json result{{"value", q(rep.value)},     {"threshold", rep.threshold}, {"chernoff_delta", rep.chernoff_delta},
                {"chernoff_upper", rep.chernoff_upper}, {"max_frequency", max_freq}, {"rows", rows}};
    emit(a.output, envelope("concentration", config, result, sw.ms()).dump(2) + "\n", ctx);
    return kOk;
}

// ---- appendix-check ----

struct AppendixArgs {
    std::string which, density = "9/10";
    int n = 8;
    int grid = 1000;
    bool full = false;
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    OutputSpec output;
};

inline int appendix_check(const AppendixArgs& a, Context& ctx) {
    Stopwatch sw;
    json config{{"which", a.which}};
    json result;
    bool holds = true;
    if (a.which == "entropy") {
        require(a.grid >= 1, "--grid must be positive");
        config["grid"] = a.grid;
        double worst = -1e300;
        std::string worst_p;
        std::uint64_t violations = 0;
        for (int k = 0; k <= a.grid; ++k) {
            const Rational p(k, a.grid);
            const auto gap = info::binary_entropy_gap(p);
            violations += !gap.holds();
            if (gap.lhs - gap.rhs > worst) {
                worst = gap.lhs - gap.rhs;
                worst_p = q(p);
            }
        }
        holds = violations == 0;
        result = {{"points", a.grid + 1}, {"violations", violations}, {"max_lhs_minus_rhs", worst}, {"argmax", worst_p},
                  {"holds", holds}};
    } else if (a.which == "marginal") {
        config["n"] = a.n;
        config["full"] = a.full;
        info::MarginalReport r;
        if (a.full) {
            r = info::conditional_marginal_report(a.n, info::full_cube_fibers(a.n));
        } else {
            const std::uint64_t seed = need_seed(a.seed_opt, a.seed, "to draw the random triple set");
            const Rational density = parse_rational(a.density);
            config["seed"] = seed;
            config["density"] = q(density);
            require(3 * a.n <= 24, "--n must be at most 8 for an explicit random triple set");
            Rng rng(seed);
            const auto T = f2::random_set(3 * a.n, density, rng);
            r = info::conditional_marginal_report(a.n, info::explicit_fibers(T, a.n));
        }
        json per = json::array();
        for (const auto& d : r.per_coordinate) per.push_back(d ? json(q(*d)) : json(nullptr));
        result = {{"total", r.total},
                  {"per_coordinate", per},
                  {"excluded", r.excluded},
                  {"mean", q(r.mean)},
                  {"mean_approx", to_double(r.mean)},
                  {"conditional_entropy", r.conditional_entropy}};
    } else {
        throw InputError("--which must be 'entropy' or 'marginal'");
    }
    emit(a.output, envelope("appendix-check", config, result, sw.ms()).dump(2) + "\n", ctx);
    return holds ? kOk : kPostcondition;
}

// ---- random-set ----

struct RandomSetArgs {
    int n = 8;
    std::string density = "1/2";
    std::uint64_t seed = 0;
    const CLI::Option* seed_opt = nullptr;
    std::string out;
};

inline int random_set(const RandomSetArgs& a, Context& ctx) {
    const std::uint64_t seed = need_seed(a.seed_opt, a.seed, "to draw a random set");
    Rng rng(seed);
    const auto A = f2::random_set(a.n, parse_rational(a.density), rng);
    OutputSpec o{a.out};
    emit(o, f2::set_to_json(A).dump() + "\n", ctx);
    return kOk;
}

// ---- dispatch ----

inline void add_output(CLI::App* sub, OutputSpec& o, bool csv) {
    sub->add_option("--out", o.out, csv ? "Output path, or 'json' / 'csv' for stdout in that format"
                                        : "Output path (default stdout)");
    if (csv) {
        sub->add_option("--format", o.format, "json or csv when --out is a path")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("!--no-header", o.header, "Omit the CSV header row (for appending sweeps)");
    }
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"spreadlab: spreadness, uniformization, diagonal products and GHZ repetition experiments",
                 "spreadlab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SpreadCheckArgs sc;
    auto* s1 = app.add_subcommand("spread-check", "Decide (r, eps)-algebraic spreadness of a set in a subspace");
    s1->add_option("--set", sc.set, "Set JSON {n, members}")->required();
    s1->add_option("--space", sc.space, "Subspace JSON {n, offset, basis}; default the full space");
    s1->add_option("--r", sc.r, "Codimension budget r");
    s1->add_option("--eps", sc.eps, "Epsilon, as p/q or a decimal");
    s1->add_option("--mode", sc.mode, "exact or sampled:COUNT:SEED");
    s1->add_option("--budget", sc.budget, "Work limit before a budget error");
    add_output(s1, sc.output, false);

    SquareCoverArgs sq;
    auto* s2 = app.add_subcommand("square-cover", "Counting report for S(X, Y, Z) and its square cover");
    s2->add_option("--x", sq.x, "X set JSON")->required();
    s2->add_option("--y", sq.y, "Y set JSON")->required();
    s2->add_option("--z", sq.z, "Z set JSON")->required();
    s2->add_option("--max-pairs", sq.max_pairs, "Limit on |S(X, Y, Z)|");
    add_output(s2, sq.output, true);

    UniformizeArgs un;
    auto* s3 = app.add_subcommand("uniformize", "Decompose S(X, Y, Z) into spread coset-aligned pieces");
    s3->add_option("--x", un.x, "X set JSON")->required();
    s3->add_option("--y", un.y, "Y set JSON")->required();
    s3->add_option("--z", un.z, "Z set JSON")->required();
    s3->add_option("--space", un.space, "Linear subspace JSON containing X, Y, Z; default the full space");
    s3->add_option("--r", un.r, "Codimension budget r");
    s3->add_option("--eps", un.eps, "Epsilon");
    s3->add_option("--eta", un.eta, "Loss fraction eta");
    s3->add_option("--depth", un.depth, "Recursion depth cap, or auto for ceil(20 log2(1/eta))");
    s3->add_option("--r0", un.r0, "Override the two-set codimension of each round");
    s3->add_option("--round-eps", un.round_eps, "Override the per-round epsilon (default eps/10)");
    s3->add_option("--round-eta", un.round_eta, "Override the per-round eta (default eta^2/100)");
    s3->add_flag("--round", un.single_round, "Run a single partitioning round instead of the recursion");
    s3->add_option("--budget", un.budget, "Spreadness work limit per check");
    add_output(s3, un.output, false);

    GameValueArgs gv;
    auto* s4 = app.add_subcommand("game-value", "Exact classical value by best-response brute force");
    s4->add_option("--game", gv.game, "Game JSON; default the GHZ game");
    s4->add_option("--reps", gv.reps, "Parallel repetitions, built explicitly");
    s4->add_option("--max-pairs", gv.max_pairs, "Limit on (f, g) strategy pairs");
    s4->add_flag("--json", gv.json_report, "Emit a JSON report instead of the bare value");
    add_output(s4, gv.output, false);

    HardCoordinateArgs hc;
    auto* s5 = app.add_subcommand("hard-coordinate", "Conditional per-coordinate win rates on E x F x G");
    s5->add_option("--game", hc.game, "Base game JSON; default the GHZ game");
    s5->add_option("--n", hc.n, "Number of repetitions");
    s5->add_option("--e", hc.e, "E set JSON")->required();
    s5->add_option("--f", hc.f, "F set JSON")->required();
    s5->add_option("--g", hc.g, "G set JSON")->required();
    s5->add_option("--battery", hc.battery.text, "default, or a member count");
    hc.seed_opt = s5->add_option("--seed", hc.seed, "Battery seed (required)");
    s5->add_option("--certify-r", hc.certify_r, "r for the reported spread certificates of E, F, G");
    s5->add_option("--certify-eps", hc.certify_eps, "eps for the reported spread certificates");
    add_output(s5, hc.output, true);

    ConcentrationArgs co;
    auto* s6 = app.add_subcommand("concentration", "Tail frequency of winning at least (val + eps) n coordinates");
    s6->add_option("--game", co.game, "Base game JSON; default the GHZ game");
    s6->add_option("--n", co.n, "Number of repetitions (at most 64)");
    s6->add_option("--eps", co.eps, "Excess over the value");
    s6->add_option("--trials", co.trials, "Sampled inputs per strategy");
    s6->add_option("--battery", co.battery.text, "default, or a member count");
    co.seed_opt = s6->add_option("--seed", co.seed, "Seed for the battery and the inputs (required)");
    add_output(s6, co.output, true);

    AppendixArgs ap;
    auto* s7 = app.add_subcommand("appendix-check", "Binary-entropy inequality or conditional-marginal distances");
    s7->add_option("--which", ap.which, "entropy or marginal")->required()->check(CLI::IsMember({"entropy", "marginal"}));
    s7->add_option("--n", ap.n, "Dimension for the marginal check");
    ap.seed_opt = s7->add_option("--seed", ap.seed, "Seed for the random triple set (required unless --full)");
    s7->add_option("--density", ap.density, "Density of the random triple set");
    s7->add_flag("--full", ap.full, "Use the full cube instead of a random triple set");
    s7->add_option("--grid", ap.grid, "Entropy grid resolution");
    add_output(s7, ap.output, false);

    RandomSetArgs rs;
    auto* s8 = app.add_subcommand("random-set", "Write a seeded random set as set JSON");
    s8->add_option("--n", rs.n, "Ambient dimension");
    s8->add_option("--density", rs.density, "Density");
    rs.seed_opt = s8->add_option("--seed", rs.seed, "Seed (required)");
    s8->add_option("--out", rs.out, "Output path (default stdout)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kInvalidInput;
    }

    Context ctx{out, err};
    try {
        if (*s1) return spread_check(sc, ctx);
        if (*s2) return square_cover(sq, ctx);
        if (*s3) return uniformize(un, ctx);
        if (*s4) return game_value(gv, ctx);
        if (*s5) return hard_coordinate(hc, ctx);
        if (*s6) return concentration(co, ctx);
        if (*s7) return appendix_check(ap, ctx);
        if (*s8) return random_set(rs, ctx);
    } catch (const BudgetError& e) {
        err << "spreadlab: budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const PostconditionError& e) {
        err << "spreadlab: postcondition failed: " << e.what() << "\n";
        return kPostcondition;
    } catch (const Error& e) {
        err << "spreadlab: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const json::exception& e) {
        err << "spreadlab: malformed input: " << e.what() << "\n";
        return kInvalidInput;
    }
    return kInvalidInput;
}

} // namespace spreadlab::cli
