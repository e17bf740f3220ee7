#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "../diag/diagonal_product.hpp"
#include "../f2/set.hpp"
#include "../info/tails.hpp"
#include "evaluate.hpp"
#include "value.hpp"

namespace spreadlab::games {

// One of the four inputs of a square seen from coordinate i: x_alpha is whichever of
// {x, x + w} has alpha at coordinate i, likewise y_beta, and z = x_alpha + y_beta.
struct EmbeddedInput {
    std::uint32_t alpha = 0, beta = 0, gamma = 0;
    std::uint64_t x = 0, y = 0, z = 0;
};

inline std::array<EmbeddedInput, 4> square_embedding(const diag::Square& sq, int i) {
    require(i >= 0 && i < 32 && sq.is_nontrivial(i), "coordinate " + std::to_string(i) + " is trivial in the square");
    std::array<EmbeddedInput, 4> out;
    int k = 0;
    for (std::uint32_t alpha = 0; alpha < 2; ++alpha)
        for (std::uint32_t beta = 0; beta < 2; ++beta) {
            EmbeddedInput e;
            e.alpha = alpha;
            e.beta = beta;
            e.gamma = alpha ^ beta;
            e.x = ((sq.x >> i) & 1u) == alpha ? sq.x : sq.x ^ sq.w;
            e.y = ((sq.y >> i) & 1u) == beta ? sq.y : sq.y ^ sq.w;
            e.z = e.x ^ e.y;
            out[k++] = e;
        }
    return out;
}

// The embedded inputs carry (alpha, beta, gamma) at coordinate i and are exactly the
// square's four points.
inline bool embedding_consistent(const diag::Square& sq, int i) {
    auto emb = square_embedding(sq, i);
    auto pts = sq.points();
    std::array<bool, 4> used{};
    for (const auto& e : emb) {
        if (((e.x >> i) & 1u) != e.alpha || ((e.y >> i) & 1u) != e.beta || ((e.z >> i) & 1u) != e.gamma) return false;
        bool found = false;
        for (int k = 0; k < 4; ++k)
            if (!used[k] && pts[k].x == e.x && pts[k].y == e.y) {
                used[k] = found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// Fraction of the square's four inputs (x, y, x + y) on which coordinate i is won.
inline Rational hard_square_check(const RepeatedGame& G, const Strategy& s, const diag::Square& sq, int i) {
    check_strategy_width(G, s);
    if (i < 0 || i >= G.n() || !sq.is_nontrivial(i))
        throw InputError("coordinate " + std::to_string(i) + " is not a non-trivial coordinate of the square");
    require(sq.x <= G.mask() && sq.y <= G.mask() && sq.w <= G.mask(), "square lies outside F_2^n");
    int won = 0;
    for (const auto& p : sq.points()) {
        const std::uint64_t z = p.x ^ p.y;
        won += (G.win_mask(p.x, p.y, z, s.answer(0, p.x), s.answer(1, p.y), s.answer(2, z)) >> i) & 1u;
    }
    return Rational(won, 4);
}

struct ConditionalWinReport {
    std::uint64_t event_size = 0;         // |S(E, F, G)|
    std::vector<Rational> per_coordinate; // Pr[Win_i | E x F x G]
    Rational mean;                        // over i
};

// Inputs conditioned on x in E, y in F, z in G are uniform on the diagonal product S(E, F, G).
inline ConditionalWinReport conditional_win_experiment(const RepeatedGame& Gm, const Strategy& s, const f2::F2Set& E,
                                                       const f2::F2Set& F, const f2::F2Set& G,
                                                       std::uint64_t max_pairs = diag::kDefaultMaxPairs) {
    check_strategy_width(Gm, s);
    for (const f2::F2Set* A : {&E, &F, &G})
        require(A->ambient_dim() == Gm.n(), "event sets must live in F_2^n with n = " + std::to_string(Gm.n()));
    if (E.size() * F.size() > max_pairs) throw BudgetError("conditional experiment exceeds the pair budget");
    const int n = Gm.n();
    std::vector<std::uint64_t> per(n, 0);
    ConditionalWinReport r;
    const auto fy = F.members();
    std::vector<std::uint64_t> b(fy.size());
    for (std::size_t k = 0; k < fy.size(); ++k) b[k] = s.answer(1, fy[k]);
    E.for_each([&](std::uint32_t x) {
        const std::uint64_t a = s.answer(0, x);
        for (std::size_t k = 0; k < fy.size(); ++k) {
            const std::uint32_t z = x ^ fy[k];
            if (!G.contains(z)) continue;
            ++r.event_size;
            for (std::uint64_t w = Gm.win_mask(x, fy[k], z, a, b[k], s.answer(2, z)); w; w &= w - 1)
                ++per[std::countr_zero(w)];
        }
    });
    if (r.event_size == 0) throw InputError("the conditioning event S(E, F, G) is empty");
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) {
        r.per_coordinate.push_back(Rational(BigInt(per[i]), BigInt(r.event_size)));
        total += per[i];
    }
    r.mean = Rational(BigInt(total), BigInt(r.event_size) * n);
    return r;
}

struct TailRow {
    std::string strategy;
    std::uint64_t hits = 0;   // trials with Z >= threshold
    std::uint64_t trials = 0;
    double frequency = 0;
    info::Interval wilson;
    double std_error = 0;
};

struct ConcentrationReport {
    int n = 0;
    Rational value;            // val of the base game
    Rational epsilon;
    std::uint64_t threshold = 0;  // ceil((value + epsilon) n)
    double chernoff_delta = 0;    // epsilon / value
    double chernoff_upper = 1;    // exp(-delta^2 value n / 3)
    std::vector<TailRow> rows;
};

// Strategy k draws its inputs from Rng(derive_seed(seed, k)).
inline ConcentrationReport concentration_experiment(const RepeatedGame& G, const std::vector<StrategyPtr>& battery,
                                                    const Rational& epsilon, std::uint64_t trials,
                                                    std::uint64_t seed) {
    require(epsilon > 0, "epsilon must be positive");
    require(trials > 0, "concentration needs at least one trial");
    ConcentrationReport rep;
    rep.n = G.n();
    rep.value = game_value_bruteforce(G.base()).value;
    rep.epsilon = epsilon;
    rep.threshold = ceil_of((rep.value + epsilon) * G.n()).convert_to<std::uint64_t>();
    rep.chernoff_delta = to_double(epsilon / rep.value);
    if (rep.chernoff_delta < 1)
        rep.chernoff_upper = info::chernoff_reference(G.n(), to_double(rep.value), rep.chernoff_delta).upper;
    for (std::size_t k = 0; k < battery.size(); ++k) {
        TailRow row;
        row.strategy = battery[k]->name();
        row.trials = trials;
        for_each_sampled_input(G, *battery[k], trials, derive_seed(seed, k),
                               [&](std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t won) {
                                   row.hits += static_cast<std::uint64_t>(std::popcount(won)) >= rep.threshold;
                               });
        row.frequency = static_cast<double>(row.hits) / static_cast<double>(trials);
        row.wilson = info::wilson_interval(row.hits, trials);
        row.std_error = std::sqrt(row.frequency * (1 - row.frequency) / static_cast<double>(trials));
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace spreadlab::games
