#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "game.hpp"

namespace spreadlab::games {

// Deterministic strategy of a single-round game: one answer per question, per player.
struct StrategyTables {
    std::vector<std::uint32_t> f, g, h;
};

struct ValueResult {
    Rational value;
    StrategyTables witness;
};

inline constexpr std::uint64_t kDefaultValuePairs = std::uint64_t{1} << 24;

inline long double strategy_pair_count(const Game& G) {
    return std::pow(static_cast<long double>(G.answer_sizes()[0]), G.question_sizes()[0]) *
           std::pow(static_cast<long double>(G.answer_sizes()[1]), G.question_sizes()[1]);
}

// Exact value over deterministic strategies. (f, g) is exhausted in lexicographic order
// (question 0 is the least significant digit); h is the per-z best response, ties to the
// smallest answer. The witness is the first maximizer met.
inline ValueResult game_value_bruteforce(const Game& G, std::uint64_t max_pairs = kDefaultValuePairs) {
    const auto pairs = strategy_pair_count(G);
    if (pairs > static_cast<long double>(max_pairs))
        throw BudgetError("brute force needs about 2^" + std::to_string(std::lround(std::log2(static_cast<double>(pairs)))) +
                          " (f, g) pairs, above the budget of " + std::to_string(max_pairs));
    const auto& Q = G.question_sizes();
    const auto& A = G.answer_sizes();
    const auto& query = G.query();
    const std::size_t k = query.support_size();

    // wins_at[s][(a * |B| + b) * |C| + c] for the s-th support point.
    std::vector<std::vector<std::uint8_t>> wins_at(k);
    for (std::size_t s = 0; s < k; ++s) {
        wins_at[s].resize(G.answer_count());
        for (std::uint32_t a = 0; a < A[0]; ++a)
            for (std::uint32_t b = 0; b < A[1]; ++b)
                for (std::uint32_t c = 0; c < A[2]; ++c)
                    wins_at[s][(a * A[1] + b) * A[2] + c] = G.wins(query.support()[s], {a, b, c});
    }

    std::vector<std::uint32_t> f(Q[0], 0), g(Q[1], 0);
    std::vector<std::uint64_t> score(std::uint64_t{Q[2]} * A[2]);
    std::uint64_t best = 0;
    bool have = false;
    ValueResult out;
    auto advance = [](std::vector<std::uint32_t>& t, std::uint32_t radix) {
        for (auto& d : t) {
            if (++d < radix) return true;
            d = 0;
        }
        return false;
    };
    do {
        std::fill(g.begin(), g.end(), 0);
        do {
            std::fill(score.begin(), score.end(), 0);
            for (std::size_t s = 0; s < k; ++s) {
                const auto& q = query.support()[s];
                const auto* row = &wins_at[s][(f[q.x] * A[1] + g[q.y]) * A[2]];
                const std::uint64_t w = query.numerators()[s];
                for (std::uint32_t c = 0; c < A[2]; ++c)
                    if (row[c]) score[std::uint64_t{q.z} * A[2] + c] += w;
            }
            std::uint64_t total = 0;
            for (std::uint32_t z = 0; z < Q[2]; ++z) {
                std::uint64_t m = 0;
                for (std::uint32_t c = 0; c < A[2]; ++c) m = std::max(m, score[std::uint64_t{z} * A[2] + c]);
                total += m;
            }
            if (!have || total > best) {
                have = true;
                best = total;
                out.witness.f = f;
                out.witness.g = g;
                out.witness.h.assign(Q[2], 0);
                for (std::uint32_t z = 0; z < Q[2]; ++z) {
                    std::uint32_t arg = 0;
                    for (std::uint32_t c = 1; c < A[2]; ++c)
                        if (score[std::uint64_t{z} * A[2] + c] > score[std::uint64_t{z} * A[2] + arg]) arg = c;
                    out.witness.h[z] = arg;
                }
            }
        } while (advance(g, A[1]));
    } while (advance(f, A[0]));
    out.value = Rational(BigInt(best), BigInt(query.denominator()));
    return out;
}

// Winning probability of fixed tables.
inline Rational strategy_value(const Game& G, const StrategyTables& s) {
    require(s.f.size() == G.question_sizes()[0] && s.g.size() == G.question_sizes()[1] &&
                s.h.size() == G.question_sizes()[2],
            "strategy tables must cover every question");
    std::uint64_t won = 0;
    for (std::size_t k = 0; k < G.query().support_size(); ++k) {
        const auto& q = G.query().support()[k];
        if (G.wins(q, {s.f[q.x], s.g[q.y], s.h[q.z]})) won += G.query().numerators()[k];
    }
    return Rational(BigInt(won), BigInt(G.query().denominator()));
}

} // namespace spreadlab::games
