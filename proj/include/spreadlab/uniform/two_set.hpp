#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "one_set.hpp"

namespace spreadlab::uniform {

struct TwoSetResult {
    std::vector<Piece> pieces;   // rectangles, canonical order
    std::uint64_t total = 0;     // |X| |Y|
    std::uint64_t covered = 0;
    int levels = 0;              // deepest alternation reached
};

inline int two_set_level_cap(const Rational& epsilon, const Rational& eta) {
    return 16 * static_cast<int>(std::ceil(std::log2(1 / to_double(eta)) / to_double(epsilon) - 1e-12));
}

namespace detail {

struct TwoSetContext {
    int r;
    Rational epsilon;
    std::uint64_t budget;
    int cap;
    std::vector<Piece>* out;
    int levels = 0;
    bool capped = false;
};

inline Piece make_rectangle(const AffineSubspace& L, std::vector<std::uint32_t> X, std::vector<std::uint32_t> Y,
                            Certificate cx, Certificate cy) {
    Piece p;
    p.space = L;
    p.x_shift = L.reduce(X.front());
    p.y_shift = L.reduce(Y.front());
    p.mass = static_cast<std::uint64_t>(X.size()) * Y.size();
    p.X = std::move(X);
    p.Y = std::move(Y);
    p.certificates = {std::move(cx), std::move(cy)};
    return p;
}

// Members grouped by coset of the linear L, keyed by reduced representative; ascending.
inline std::map<std::uint32_t, std::vector<std::uint32_t>> split_by_coset(std::span<const std::uint32_t> B,
                                                                          const AffineSubspace& L) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> parts;
    for (auto v : B) parts[L.reduce(v)].push_back(v);
    return parts;
}

// A lies in A_space, B in a coset of A_space's linear part. Peels A into spread pieces; each
// piece pairs with the parts of B in cosets of its linear part, and a part that is not spread
// recurses with the roles of the two sets exchanged and half the relative loss.
inline void two_set_step(std::vector<std::uint32_t> A, const AffineSubspace& A_space,
                         const std::vector<std::uint32_t>& B, bool a_is_x, const Rational& eta_rel, int level,
                         TwoSetContext& ctx) {
    if (A.empty() || B.empty()) return;
    ctx.levels = std::max(ctx.levels, level);
    if (level > ctx.cap) {
        ctx.capped = true;
        return;
    }
    const Rational eta_one = eta_rel / 2 * Rational(BigInt(A.size()), BigInt(A_space.size()));
    auto peeled = uniformize_one_set(A, A_space, ctx.r, ctx.epsilon, std::min(eta_one, Rational(1, 2)), ctx.budget);
    for (auto& piece : peeled.pieces) {
        const AffineSubspace L = piece.space.direction();
        for (auto& [rep, part] : split_by_coset(B, L)) {
            const AffineSubspace coset = L.translated(rep);
            auto verdict = spread::check_algebraic_spread(
                part, coset, spread::SpreadParams{ctx.r, ctx.epsilon, spread::SpreadMode::exact(), ctx.budget});
            if (verdict.passed) {
                if (a_is_x)
                    ctx.out->push_back(make_rectangle(L, piece.members, std::move(part), piece.certificate, verdict));
                else
                    ctx.out->push_back(make_rectangle(L, std::move(part), piece.members, verdict, piece.certificate));
            } else {
                two_set_step(std::move(part), coset, piece.members, !a_is_x, eta_rel / 2, level + 1, ctx);
            }
        }
    }
}

} // namespace detail

// Disjoint rectangles X_i x Y_i inside X x Y, both sides (r, eps)-spread in cosets of a common
// linear V_i, covering all but at most eta |X| |Y|. X and Y lie in cosets of the linear part
// of V (usually both in V itself).
inline TwoSetResult uniformize_two_sets(std::span<const std::uint32_t> X, std::span<const std::uint32_t> Y,
                                        const AffineSubspace& V, int r, const Rational& epsilon, const Rational& eta,
                                        std::uint64_t budget = spread::kDefaultSpreadBudget, int level_cap = -1) {
    spread::SpreadParams{r, epsilon, spread::SpreadMode::exact(), budget}.validate();
    check_eta(eta);
    const AffineSubspace L = V.direction();
    std::vector<std::uint32_t> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    TwoSetResult res;
    res.total = static_cast<std::uint64_t>(xs.size()) * ys.size();
    if (xs.empty() || ys.empty()) return res;
    const std::uint32_t ax = L.reduce(xs.front()), ay = L.reduce(ys.front());
    for (auto v : xs) require(L.reduce(v) == ax, "X must lie in a single coset of the subspace");
    for (auto v : ys) require(L.reduce(v) == ay, "Y must lie in a single coset of the subspace");
    detail::TwoSetContext ctx{r, epsilon, budget, level_cap < 0 ? two_set_level_cap(epsilon, eta) : level_cap,
                              &res.pieces};
    detail::two_set_step(xs, L.translated(ax), ys, true, eta, 0, ctx);
    sort_canonically(res.pieces);
    for (const auto& p : res.pieces) res.covered += p.mass;
    res.levels = ctx.levels;
    const Rational lost = Rational(BigInt(res.total - res.covered));
    if (ctx.capped && lost > eta * Rational(BigInt(res.total))) {
        DecompositionResult partial;
        partial.pieces = res.pieces;
        partial.total = res.total;
        partial.params = {r, epsilon, eta, r, epsilon, ctx.cap, budget};
        partial.finalize();
        throw IncompleteDecomposition("two-set decomposition hit its level cap of " + std::to_string(ctx.cap) +
                                          " before reaching coverage",
                                      std::move(partial));
    }
    return res;
}

inline TwoSetResult uniformize_two_sets(const f2::F2Set& X, const f2::F2Set& Y, const AffineSubspace& V, int r,
                                        const Rational& epsilon, const Rational& eta,
                                        std::uint64_t budget = spread::kDefaultSpreadBudget, int level_cap = -1) {
    f2::check_same_dim(X, V);
    f2::check_same_dim(Y, V);
    for (const f2::F2Set* A : {&X, &Y}) A->for_each([&](std::uint32_t v) {
        require(V.contains(v), "set is not contained in the subspace");
    });
    const auto xm = X.members(), ym = Y.members();
    return uniformize_two_sets(xm, ym, V, r, epsilon, eta, budget, level_cap);
}

} // namespace spreadlab::uniform
