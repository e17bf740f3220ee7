#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "../core/rng.hpp"
#include "params.hpp"
#include "relation.hpp"

namespace spreadlab::spread {

struct Rectangle {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    friend auto operator<=>(const Rectangle&, const Rectangle&) = default;
};

struct LowRows {
    std::vector<std::size_t> rows;
    friend auto operator<=>(const LowRows&, const LowRows&) = default;
};

namespace detail {

using u128 = unsigned __int128;

// Fraction ones / cells for a rectangle; compares by value.
struct Mean {
    std::uint64_t ones = 0;
    std::uint64_t cells = 1;
    bool operator>(const Mean& o) const { return u128(ones) * o.cells > u128(o.ones) * cells; }
};

// Smallest side length s with s * other * 2^r >= left * right.
inline std::uint64_t min_side(std::uint64_t other, std::uint64_t left, std::uint64_t right, int r) {
    if (r >= 64) return 1;
    const u128 need = u128(left) * right;
    const u128 per = u128(other) << r;
    return static_cast<std::uint64_t>(std::max<u128>(1, (need + per - 1) / per));
}

inline bool exceeds(const Mean& m, const BipartiteRelation& f, const Rational& epsilon) {
    return Rational(BigInt(m.ones), BigInt(m.cells)) > (1 + epsilon) * f.mean();
}

// Rows ordered by (count descending, index ascending).
inline std::vector<std::size_t> rank_desc(const std::vector<std::uint64_t>& counts) {
    std::vector<std::size_t> order(counts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
    return order;
}

// Best admissible prefix of the ranked rows against a fixed column set of size t.
inline std::pair<Mean, std::size_t> best_prefix(const std::vector<std::uint64_t>& counts,
                                                const std::vector<std::size_t>& order, std::uint64_t t,
                                                std::uint64_t s_min) {
    Mean best{0, 1};
    std::size_t best_s = 0;
    std::uint64_t prefix = 0;
    for (std::size_t s = 1; s <= order.size(); ++s) {
        prefix += counts[order[s - 1]];
        if (s < s_min) continue;
        Mean m{prefix, s * t};
        if (best_s == 0 || m > best) {
            best = m;
            best_s = s;
        }
    }
    return {best, best_s};
}

} // namespace detail

inline constexpr int kMaxExactRectangleSide = 24;

// Exact: every column subset T of the smaller side, and for each T the optimal rows, which
// for a fixed |S| are the rows with the largest restricted counts.
inline SpreadVerdict<Rectangle> check_combinatorial_spread_exact(const BipartiteRelation& f, int r,
                                                                 const Rational& epsilon,
                                                                 std::uint64_t budget = kDefaultSpreadBudget) {
    using namespace detail;
    require(f.ones() > 0, "combinatorial spreadness needs a relation with positive mean");
    const bool flip = f.right_size() > f.left_size();
    const BipartiteRelation g = flip ? f.transposed() : f;
    const std::size_t L = g.left_size(), c = g.right_size();
    if (c > kMaxExactRectangleSide || (BigInt(1) << c) * L > BigInt(budget))
        throw BudgetError("exact combinatorial spreadness over " + std::to_string(f.left_size()) + "x" +
                          std::to_string(f.right_size()) +
                          " exceeds the enumeration budget; use sampled mode instead");
    std::vector<std::uint64_t> rows(L);
    for (std::size_t i = 0; i < L; ++i) rows[i] = g.row(i)[0];
    std::vector<std::uint64_t> counts(L);
    std::vector<std::size_t> hist(c + 1);
    Mean best{0, 1};
    std::uint64_t best_mask = 0;
    std::size_t best_s = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << c); ++mask) {
        const std::uint64_t t = std::popcount(mask);
        const std::uint64_t s_min = min_side(t, L, c, r);
        if (s_min > L) continue;
        std::fill(hist.begin(), hist.end(), 0);
        for (std::size_t i = 0; i < L; ++i) ++hist[std::popcount(rows[i] & mask)];
        // Walk rows in descending count via the histogram.
        std::uint64_t prefix = 0, s = 0;
        for (std::size_t v = t + 1; v-- > 0;) {
            for (std::size_t k = 0; k < hist[v]; ++k) {
                ++s;
                prefix += v;
                if (s < s_min) continue;
                Mean m{prefix, s * t};
                if (best_s == 0 || m > best) {
                    best = m;
                    best_mask = mask;
                    best_s = s;
                }
            }
        }
    }
    SpreadVerdict<Rectangle> verdict;
    verdict.coverage = Coverage::exact;
    verdict.observed_ratio = Rational(BigInt(best.ones), BigInt(best.cells)) / f.mean();
    if (best_s == 0 || !exceeds(best, f, epsilon)) return verdict;
    verdict.passed = false;
    for (std::size_t i = 0; i < L; ++i) counts[i] = std::popcount(rows[i] & best_mask);
    auto order = rank_desc(counts);
    Rectangle w;
    w.rows.assign(order.begin(), order.begin() + best_s);
    std::sort(w.rows.begin(), w.rows.end());
    for (std::size_t j = 0; j < c; ++j)
        if ((best_mask >> j) & 1u) w.cols.push_back(j);
    if (flip) std::swap(w.rows, w.cols);
    verdict.witness = std::move(w);
    return verdict;
}

// One-sided: random column sets refined by alternating best responses.
inline SpreadVerdict<Rectangle> check_combinatorial_spread_sampled(const BipartiteRelation& f, int r,
                                                                   const Rational& epsilon,
                                                                   std::uint64_t samples,
                                                                   std::uint64_t seed) {
    using namespace detail;
    require(f.ones() > 0, "combinatorial spreadness needs a relation with positive mean");
    const BipartiteRelation ft = f.transposed();
    const std::size_t L = f.left_size(), R = f.right_size();
    Rng rng(seed);
    Mean best{f.ones(), L * R};
    Rectangle best_rect;
    std::vector<std::uint64_t> side_mask;
    std::vector<std::uint64_t> counts;

    // Best subset of `rel`'s rows against the column set given as a bit mask.
    auto respond = [&](const BipartiteRelation& rel, const std::vector<std::uint64_t>& mask,
                       std::uint64_t t, std::vector<std::size_t>& chosen) {
        counts.assign(rel.left_size(), 0);
        for (std::size_t i = 0; i < rel.left_size(); ++i) {
            auto row = rel.row(i);
            std::uint64_t c = 0;
            for (std::size_t k = 0; k < row.size(); ++k) c += std::popcount(row[k] & mask[k]);
            counts[i] = c;
        }
        auto order = rank_desc(counts);
        const std::uint64_t s_min = min_side(t, L, R, r);
        chosen.clear();
        if (s_min > rel.left_size()) return Mean{0, 1};
        auto [m, s] = best_prefix(counts, order, t, s_min);
        chosen.assign(order.begin(), order.begin() + s);
        std::sort(chosen.begin(), chosen.end());
        return m;
    };
    auto to_mask = [](const std::vector<std::size_t>& idx, std::size_t size) {
        std::vector<std::uint64_t> m((size + 63) / 64, 0);
        for (auto i : idx) m[i / 64] |= std::uint64_t{1} << (i % 64);
        return m;
    };

    std::vector<std::size_t> rows, cols;
    for (std::uint64_t s = 0; s < samples; ++s) {
        cols.clear();
        while (cols.empty())
            for (std::size_t j = 0; j < R; ++j)
                if (rng.next() & 1u) cols.push_back(j);
        Mean current{0, 1};
        for (int round = 0; round < 4; ++round) {
            Mean m = respond(f, to_mask(cols, R), cols.size(), rows);
            if (rows.empty()) break;
            if (m > best) {
                best = m;
                best_rect = {rows, cols};
            }
            std::vector<std::size_t> next_cols;
            Mean m2 = respond(ft, to_mask(rows, L), rows.size(), next_cols);
            if (next_cols.empty()) break;
            if (m2 > best) {
                best = m2;
                best_rect = {rows, next_cols};
            }
            if (!(m2 > current)) break;
            current = m2;
            cols = std::move(next_cols);
        }
    }
    SpreadVerdict<Rectangle> verdict;
    verdict.coverage = Coverage::sampled;
    verdict.observed_ratio = Rational(BigInt(best.ones), BigInt(best.cells)) / f.mean();
    if (!best_rect.rows.empty() && exceeds(best, f, epsilon)) {
        verdict.passed = false;
        verdict.witness = best_rect;
    }
    return verdict;
}

inline SpreadVerdict<Rectangle> check_combinatorial_spread(const BipartiteRelation& f, int r,
                                                           const Rational& epsilon,
                                                           const SpreadMode& mode = SpreadMode::exact(),
                                                           std::uint64_t budget = kDefaultSpreadBudget) {
    SpreadParams{r, epsilon, mode, budget}.validate();
    return mode.is_exact() ? check_combinatorial_spread_exact(f, r, epsilon, budget)
                           : check_combinatorial_spread_sampled(f, r, epsilon, mode.samples, mode.seed);
}

// Passes iff at most a 2^-r fraction of rows has mean <= (1 - epsilon) E[f].
inline SpreadVerdict<LowRows> check_left_marginals(const BipartiteRelation& f, int r,
                                                   const Rational& epsilon) {
    SpreadParams{r, epsilon}.validate();
    require(f.ones() > 0, "left-marginal check needs a relation with positive mean");
    const Rational threshold = (1 - epsilon) * f.mean();
    LowRows low;
    std::uint64_t min_ones = f.right_size();
    for (std::size_t i = 0; i < f.left_size(); ++i) {
        const std::uint64_t c = f.row_ones(i);
        min_ones = std::min(min_ones, c);
        if (Rational(BigInt(c), BigInt(f.right_size())) <= threshold) low.rows.push_back(i);
    }
    SpreadVerdict<LowRows> verdict;
    verdict.observed_ratio = Rational(BigInt(min_ones), BigInt(f.right_size())) / f.mean();
    if ((BigInt(low.rows.size()) << r) > BigInt(f.left_size())) {
        verdict.passed = false;
        verdict.witness = std::move(low);
    }
    return verdict;
}

} // namespace spreadlab::spread
