#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "../core/rational.hpp"
#include "../core/rng.hpp"
#include "../spread/params.hpp"
#include "repeated.hpp"
#include "strategy.hpp"

namespace spreadlab::games {

using spread::Coverage;

struct EvalMode {
    Coverage kind = Coverage::exact;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    static EvalMode exact() { return {}; }
    static EvalMode sampled(std::uint64_t trials, std::uint64_t seed) { return {Coverage::sampled, trials, seed}; }
};

// Exact enumeration covers 4^n inputs; the default admits n <= 12.
inline constexpr std::uint64_t kDefaultExactInputs = std::uint64_t{1} << 24;

inline void check_exact_budget(int n, std::uint64_t max_inputs) {
    if (2 * n > 63 || (std::uint64_t{1} << (2 * n)) > max_inputs)
        throw BudgetError("exact evaluation at n = " + std::to_string(n) +
                          " exceeds the input budget; use sampled mode instead");
}

inline void check_strategy_width(const RepeatedGame& G, const Strategy& s) {
    require(s.n() == G.n(), "strategy width " + std::to_string(s.n()) + " does not match the game's n = " +
                                std::to_string(G.n()));
}

// Calls f(x, y, z, win_mask) for every input (x, y, x ^ y) in ascending (x, y) order.
template <class F>
void for_each_input(const RepeatedGame& G, const Strategy& s, F&& f, std::uint64_t max_inputs = kDefaultExactInputs) {
    check_strategy_width(G, s);
    check_exact_budget(G.n(), max_inputs);
    const TableStrategy t = tabulate(s);
    const std::uint64_t N = std::uint64_t{1} << G.n();
    for (std::uint64_t x = 0; x < N; ++x) {
        const std::uint64_t a = t.table(0)[x];
        for (std::uint64_t y = 0; y < N; ++y) {
            const std::uint64_t z = x ^ y;
            f(x, y, z, G.win_mask(x, y, z, a, t.table(1)[y], t.table(2)[z]));
        }
    }
}

// Calls f(x, y, z, win_mask) on `trials` inputs drawn from the product query with Rng(seed).
template <class F>
void for_each_sampled_input(const RepeatedGame& G, const Strategy& s, std::uint64_t trials, std::uint64_t seed, F&& f) {
    check_strategy_width(G, s);
    require(trials > 0, "sampled evaluation needs at least one trial");
    Rng rng(seed);
    const std::uint64_t m = G.mask();
    for (std::uint64_t k = 0; k < trials; ++k) {
        const std::uint64_t x = rng.next() & m;
        const std::uint64_t y = rng.next() & m;
        const std::uint64_t z = x ^ y;
        f(x, y, z, G.win_mask(x, y, z, s.answer(0, x), s.answer(1, y), s.answer(2, z)));
    }
}

struct WinProfile {
    std::vector<Rational> per_coordinate;  // Pr[Win_i]
    Rational overall;                      // Pr[all coordinates won]
    Coverage coverage = Coverage::exact;
    std::uint64_t inputs = 0;              // inputs enumerated or sampled
    std::vector<double> per_coordinate_se; // sampled only
    double overall_se = 0;
};

inline double binomial_se(const Rational& p, std::uint64_t m) {
    const double q = to_double(p);
    return std::sqrt(q * (1 - q) / static_cast<double>(m));
}

inline WinProfile evaluate_strategy(const RepeatedGame& G, const Strategy& s, const EvalMode& mode = EvalMode::exact(),
                                    std::uint64_t max_inputs = kDefaultExactInputs) {
    const int n = G.n();
    std::vector<std::uint64_t> per(n, 0);
    std::uint64_t all = 0, inputs = 0;
    auto tally = [&](std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t won) {
        ++inputs;
        all += won == G.mask();
        for (std::uint64_t w = won; w; w &= w - 1) ++per[std::countr_zero(w)];
    };
    if (mode.kind == Coverage::exact)
        for_each_input(G, s, tally, max_inputs);
    else
        for_each_sampled_input(G, s, mode.trials, mode.seed, tally);
    WinProfile p;
    p.coverage = mode.kind;
    p.inputs = inputs;
    for (int i = 0; i < n; ++i) p.per_coordinate.push_back(Rational(BigInt(per[i]), BigInt(inputs)));
    p.overall = Rational(BigInt(all), BigInt(inputs));
    if (mode.kind == Coverage::sampled) {
        for (const auto& q : p.per_coordinate) p.per_coordinate_se.push_back(binomial_se(q, inputs));
        p.overall_se = binomial_se(p.overall, inputs);
    }
    return p;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (std::uint64_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

struct SubsetWinEstimate {
    double value = 0;
    std::optional<Rational> exact;  // set in exact mode
    double std_error = 0;           // sampled mode
    Coverage coverage = Coverage::exact;
};

// E over uniform t-subsets S of Pr[every coordinate in S won]. With Z the number of won
// coordinates, this is E[C(Z, t)] / C(n, t), so only the law of Z is needed.
inline SubsetWinEstimate win_random_subset(const RepeatedGame& G, const Strategy& s, int t,
                                           const EvalMode& mode = EvalMode::exact(),
                                           std::uint64_t max_inputs = kDefaultExactInputs) {
    const int n = G.n();
    if (t < 0 || t > n) throw InputError("subset size t must lie in [0, n]");
    std::vector<std::uint64_t> hist(n + 1, 0);
    std::uint64_t inputs = 0;
    auto tally = [&](std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t won) {
        ++hist[std::popcount(won)];
        ++inputs;
    };
    if (mode.kind == Coverage::exact)
        for_each_input(G, s, tally, max_inputs);
    else
        for_each_sampled_input(G, s, mode.trials, mode.seed, tally);
    const BigInt choose_nt = binomial(n, t);
    SubsetWinEstimate out;
    out.coverage = mode.kind;
    BigInt num = 0;
    for (int k = t; k <= n; ++k) num += binomial(k, t) * hist[k];
    const Rational mean(num, choose_nt * inputs);
    out.value = to_double(mean);
    if (mode.kind == Coverage::exact) {
        out.exact = mean;
    } else {
        double sq = 0;
        for (int k = t; k <= n; ++k) {
            const double v = to_double(Rational(binomial(k, t), choose_nt));
            sq += static_cast<double>(hist[k]) * v * v;
        }
        const double m = static_cast<double>(inputs);
        const double var = std::max(0.0, sq / m - out.value * out.value);
        out.std_error = std::sqrt(var / m);
    }
    return out;
}

} // namespace spreadlab::games
