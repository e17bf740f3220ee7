#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "../core/bits.hpp"
#include "../core/rng.hpp"
#include "../f2/enumerate.hpp"
#include "../f2/ops.hpp"
#include "../f2/set.hpp"
#include "../f2/subspace.hpp"
#include "params.hpp"

namespace spreadlab::spread {

using f2::AffineSubspace;
using f2::F2Set;

namespace detail {

struct Candidate {
    std::uint64_t count = 0;
    std::optional<AffineSubspace> space;
};

// Among subspaces with the largest count, keep the canonical minimum.
template <class Build>
void offer(Candidate& best, std::uint64_t count, Build&& build) {
    if (count < best.count) return;
    if (count > best.count || !best.space) {
        best.count = count;
        best.space = build();
        return;
    }
    AffineSubspace s = build();
    if (s < *best.space) best.space = std::move(s);
}

inline std::uint32_t syndrome(std::span<const std::uint32_t> rows, std::uint32_t t) {
    std::uint32_t s = 0;
    for (std::size_t b = 0; b < rows.size(); ++b) s |= static_cast<std::uint32_t>(parity(rows[b] & t)) << b;
    return s;
}

// Max |A ∩ V'| over affine V' ⊆ V of codimension j, with coords the local coordinates of A.
inline Candidate best_at_codim(const AffineSubspace& V, std::span<const std::uint32_t> coords, int j) {
    const int d = V.dim();
    Candidate best;
    if (j == 0) {
        best.count = coords.size();
        best.space = V;
        return best;
    }
    if (j <= d - j) {
        std::vector<std::uint64_t> counts(std::size_t{1} << j);
        f2::for_each_echelon_matrix(d, j, [&](std::span<const std::uint32_t> rows) {
            std::fill(counts.begin(), counts.end(), 0);
            for (auto t : coords) ++counts[syndrome(rows, t)];
            const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
            if (top < best.count) return;
            for (std::uint32_t rhs = 0; rhs < counts.size(); ++rhs)
                if (counts[rhs] == top)
                    offer(best, top, [&] { return f2::subspace_from_constraints(V, rows, rhs); });
        });
    } else {
        const int m = d - j;
        std::vector<std::uint32_t> reps(coords.size());
        f2::for_each_echelon_matrix(d, m, [&](std::span<const std::uint32_t> rows) {
            for (std::size_t k = 0; k < coords.size(); ++k) {
                std::uint32_t t = coords[k];
                for (auto it = rows.rbegin(); it != rows.rend(); ++it)
                    if ((t >> f2::pivot_of(*it)) & 1u) t ^= *it;
                reps[k] = t;
            }
            std::sort(reps.begin(), reps.end());
            std::uint64_t top = 0;
            for (std::size_t a = 0; a < reps.size();) {
                std::size_t b = a;
                while (b < reps.size() && reps[b] == reps[a]) ++b;
                top = std::max<std::uint64_t>(top, b - a);
                a = b;
            }
            if (top < best.count) return;
            for (std::size_t a = 0; a < reps.size();) {
                std::size_t b = a;
                while (b < reps.size() && reps[b] == reps[a]) ++b;
                if (b - a == top)
                    offer(best, top, [&] { return f2::subspace_from_generators(V, rows, reps[a]); });
                a = b;
            }
        });
    }
    return best;
}

inline bool violates(std::uint64_t count, int codim, std::uint64_t total, const Rational& epsilon) {
    return Rational(BigInt(count) << codim) > (1 + epsilon) * Rational(BigInt(total));
}

inline Rational ratio_of(std::uint64_t count, int codim, std::uint64_t total) {
    return Rational(BigInt(count) << codim, BigInt(total));
}

// Echelonizes constraint rows together with their right-hand sides.
inline std::pair<std::vector<std::uint32_t>, std::uint32_t> echelon_constraints(
    std::span<const std::uint32_t> rows, std::uint32_t rhs) {
    std::vector<std::pair<std::uint32_t, int>> echelon;
    for (std::size_t b = 0; b < rows.size(); ++b) {
        std::uint32_t row = rows[b];
        int bit = (rhs >> b) & 1u;
        for (auto& [e, eb] : echelon)
            if ((row >> f2::pivot_of(e)) & 1u) {
                row ^= e;
                bit ^= eb;
            }
        if (row == 0) continue;
        for (auto& [e, eb] : echelon)
            if ((e >> f2::pivot_of(row)) & 1u) {
                e ^= row;
                eb ^= bit;
            }
        echelon.emplace_back(row, bit);
    }
    std::sort(echelon.begin(), echelon.end(),
              [](const auto& a, const auto& b) { return f2::pivot_of(a.first) < f2::pivot_of(b.first); });
    std::vector<std::uint32_t> out;
    std::uint32_t out_rhs = 0;
    for (std::size_t b = 0; b < echelon.size(); ++b) {
        out.push_back(echelon[b].first);
        out_rhs |= static_cast<std::uint32_t>(echelon[b].second) << b;
    }
    return {out, out_rhs};
}

inline std::vector<std::uint32_t> local_coordinates(std::span<const std::uint32_t> members,
                                                    const AffineSubspace& V) {
    std::vector<std::uint32_t> coords;
    coords.reserve(members.size());
    for (auto v : members) {
        require(V.contains(v), "set is not contained in the subspace");
        coords.push_back(V.local_coordinates(v));
    }
    return coords;
}

inline SpreadVerdict<AffineSubspace> check_exact(const AffineSubspace& V,
                                                 std::span<const std::uint32_t> coords,
                                                 const SpreadParams& p) {
    const int d = V.dim();
    const int top = std::min(p.r, d);
    const std::uint64_t total = coords.size();
    SpreadVerdict<AffineSubspace> verdict;
    verdict.coverage = Coverage::exact;
    auto charge = [&](int j) {
        f2::check_enumeration_budget(f2::gaussian_binomial(d, j) * BigInt(total), p.budget,
                                     "exact algebraic spreadness check at codimension " + std::to_string(j));
    };
    // Budget is charged per codimension actually scanned.
    charge(top);
    // A codim-j violation halves into a codim-(j+1) violation, so the largest ratio over
    // codim <= r is attained at codim min(r, d).
    const Candidate at_top = best_at_codim(V, coords, top);
    verdict.observed_ratio = ratio_of(at_top.count, top, total);
    if (!violates(at_top.count, top, total, p.epsilon)) return verdict;
    verdict.passed = false;
    for (int j = 1; j <= top; ++j) {
        if (j < top) charge(j);
        Candidate c = j == top ? at_top : best_at_codim(V, coords, j);
        if (violates(c.count, j, total, p.epsilon)) {
            verdict.witness = c.space;
            break;
        }
    }
    return verdict;
}

inline SpreadVerdict<AffineSubspace> check_sampled(const AffineSubspace& V,
                                                   std::span<const std::uint32_t> coords,
                                                   const SpreadParams& p) {
    const int d = V.dim();
    const int top = std::min(p.r, d);
    const std::uint64_t total = coords.size();
    SpreadVerdict<AffineSubspace> verdict;
    verdict.coverage = Coverage::sampled;
    if (top == 0) return verdict;
    Rng rng(p.mode.seed);
    std::uint64_t best_count = total;
    int best_codim = 0;
    std::vector<std::uint32_t> best_rows;
    std::uint32_t best_rhs = 0;
    std::vector<std::uint64_t> counts;
    std::vector<std::uint32_t> rows;
    for (std::uint64_t s = 0; s < p.mode.samples; ++s) {
        const int j = 1 + static_cast<int>(rng.below(top));
        rows.clear();
        AffineSubspace row_space = AffineSubspace::span(d, {});
        while (static_cast<int>(rows.size()) < j) {
            auto v = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << d));
            if (row_space.reduce(v) == 0) continue;
            rows.push_back(v);
            row_space = AffineSubspace::span(d, rows);
        }
        counts.assign(std::size_t{1} << j, 0);
        for (auto t : coords) ++counts[syndrome(rows, t)];
        for (std::uint32_t rhs = 0; rhs < counts.size(); ++rhs) {
            if ((BigInt(counts[rhs]) << j) > (BigInt(best_count) << best_codim)) {
                best_count = counts[rhs];
                best_codim = j;
                best_rows = rows;
                best_rhs = rhs;
            }
        }
    }
    verdict.observed_ratio = ratio_of(best_count, best_codim, total);
    if (best_codim > 0 && violates(best_count, best_codim, total, p.epsilon)) {
        verdict.passed = false;
        auto [echelon, rhs] = echelon_constraints(best_rows, best_rhs);
        verdict.witness = f2::subspace_from_constraints(V, echelon, rhs);
    }
    return verdict;
}

} // namespace detail

// Members must lie in V and be nonempty.
inline SpreadVerdict<AffineSubspace> check_algebraic_spread(std::span<const std::uint32_t> members,
                                                            const AffineSubspace& V,
                                                            const SpreadParams& p) {
    p.validate();
    require(!members.empty(), "spreadness is undefined for an empty set");
    std::vector<std::uint32_t> coords = detail::local_coordinates(members, V);
    return p.mode.is_exact() ? detail::check_exact(V, coords, p) : detail::check_sampled(V, coords, p);
}

inline SpreadVerdict<AffineSubspace> check_algebraic_spread(const F2Set& A, const AffineSubspace& V,
                                                            const SpreadParams& p) {
    f2::check_same_dim(A, V);
    std::vector<std::uint32_t> members = A.members();
    return check_algebraic_spread(members, V, p);
}

struct IncrementStep {
    int step = 0;
    int codim = 0;
    Rational density_before;
    Rational density_after;
    AffineSubspace subspace;
};

struct ExtractionResult {
    AffineSubspace space;
    std::vector<std::uint32_t> members;
    std::vector<IncrementStep> log;
    SpreadVerdict<AffineSubspace> certificate;

    F2Set subset() const { return F2Set::from_members(space.ambient_dim(), members); }
    Rational density() const { return Rational(BigInt(members.size()), BigInt(space.size())); }
};

// Repeatedly restricts to a violating subspace until the restriction is spread.
inline ExtractionResult extract_spread_subset(std::span<const std::uint32_t> members,
                                              const AffineSubspace& V, int r, const Rational& epsilon,
                                              std::uint64_t budget = kDefaultSpreadBudget) {
    SpreadParams p{r, epsilon, SpreadMode::exact(), budget};
    p.validate();
    require(!members.empty(), "extraction needs a nonempty set");
    ExtractionResult out{V, std::vector<std::uint32_t>(members.begin(), members.end()), {}, {}};
    for (int step = 1;; ++step) {
        out.certificate = check_algebraic_spread(out.members, out.space, p);
        if (out.certificate.passed) return out;
        const AffineSubspace& w = *out.certificate.witness;
        IncrementStep s{step, out.space.dim() - w.dim(), out.density(), 0, w};
        std::vector<std::uint32_t> kept;
        for (auto v : out.members)
            if (w.contains(v)) kept.push_back(v);
        out.space = w;
        out.members = std::move(kept);
        s.density_after = out.density();
        out.log.push_back(std::move(s));
    }
}

inline ExtractionResult extract_spread_subset(const F2Set& X, const AffineSubspace& V, int r,
                                              const Rational& epsilon,
                                              std::uint64_t budget = kDefaultSpreadBudget) {
    f2::check_same_dim(X, V);
    std::vector<std::uint32_t> members = X.members();
    return extract_spread_subset(members, V, r, epsilon, budget);
}

} // namespace spreadlab::spread
