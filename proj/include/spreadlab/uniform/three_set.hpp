#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "../f2/ops.hpp"
#include "../f2/set.hpp"
#include "two_set.hpp"

namespace spreadlab::uniform {

struct RoundOptions {
    std::optional<int> r0;  // codimension for the two-set step; default r + ceil(r eps^-1 log2(1/(eta alpha)))
    std::uint64_t budget = spread::kDefaultSpreadBudget;
};

// Where the mass of S(X, Y, Z) not in any piece went.
struct RoundLoss {
    std::uint64_t outside_rectangles = 0;  // pairs of S outside every X_t x Y_t
    std::uint64_t z_remainder = 0;         // pairs whose x + y fell in the one-set remainder of Z_t
    std::uint64_t small_pieces = 0;        // pieces dropped by the size filter
};

struct RoundResult {
    DecompositionResult decomposition;
    Rational alpha;  // |S| / |V|^2
    Rational kappa;  // min_t |X_t||Y_t| / |V_t|^2, capped at eta alpha / 2
    int r0 = 0;
    RoundLoss loss;
    std::size_t rectangles = 0;
};

namespace detail {

struct Frame {
    AffineSubspace L;  // linear
    std::uint32_t a = 0, b = 0;
};

inline double log2_of(const Rational& q) { return std::log2(to_double(q)); }

inline std::uint64_t diagonal_count(std::span<const std::uint32_t> X, std::span<const std::uint32_t> Y,
                                    const f2::F2Set& Z) {
    std::uint64_t c = 0;
    for (auto x : X)
        for (auto y : Y) c += Z.contains(x ^ y);
    return c;
}

inline Certificate certify(std::span<const std::uint32_t> A, const AffineSubspace& coset, int r, const Rational& eps,
                           std::uint64_t budget) {
    return spread::check_algebraic_spread(A, coset, spread::SpreadParams{r, eps, spread::SpreadMode::exact(), budget});
}

inline void note_once(std::vector<std::string>& notes, const std::string& s) {
    if (std::find(notes.begin(), notes.end(), s) == notes.end()) notes.push_back(s);
}

inline RoundResult run_round(const std::vector<std::uint32_t>& X, const std::vector<std::uint32_t>& Y,
                             const std::vector<std::uint32_t>& Z, const Frame& fr, int r, const Rational& eps,
                             const Rational& eta, const RoundOptions& opt, int depth) {
    const int n = fr.L.ambient_dim();
    RoundResult out;
    auto& dec = out.decomposition;
    dec.params = {r, eps, eta, r, eps, 0, opt.budget};
    const f2::F2Set Zset = f2::F2Set::from_members(n, Z);
    dec.total = diagonal_count(X, Y, Zset);
    if (dec.total == 0) {
        dec.finalize();
        return out;
    }
    const BigInt V2 = BigInt(fr.L.size()) * fr.L.size();
    out.alpha = Rational(BigInt(dec.total), V2);
    if (!(eta < Rational(1, 50))) note_once(dec.notes, "round run with eta >= 1/50, outside the lemma's range");
    if (!(eps < Rational(1, 10))) note_once(dec.notes, "round run with epsilon >= 1/10, outside the lemma's range");
    const Rational eta_alpha = eta * out.alpha;
    out.r0 = opt.r0 ? *opt.r0 : r + static_cast<int>(std::ceil(r / to_double(eps) * -log2_of(eta_alpha) - 1e-12));

    auto rects = uniformize_two_sets(X, Y, fr.L.translated(fr.a), out.r0, eps / 10, eta_alpha, opt.budget).pieces;
    out.rectangles = rects.size();
    out.kappa = eta_alpha / 2;
    for (const auto& t : rects) {
        const Rational k(BigInt(t.X.size()) * t.Y.size(), BigInt(t.space.size()) * t.space.size());
        out.kappa = std::min(out.kappa, k);
    }
    const Rational small_threshold = eta_alpha * eta_alpha * out.kappa;
    const Rational keep_fraction = 1 - Rational(4, 10) * eps;

    std::map<AffineSubspace, std::map<std::uint32_t, std::vector<std::uint32_t>>> z_split;
    std::uint64_t in_rectangles = 0;
    std::size_t sparse_z = 0, density_without_spread = 0;
    for (const auto& t : rects) {
        auto it = z_split.find(t.space);
        if (it == z_split.end()) it = z_split.emplace(t.space, split_by_coset(Z, t.space)).first;
        const std::uint32_t zc = t.space.reduce(t.x_shift ^ t.y_shift);
        const std::uint64_t s_t = diagonal_count(t.X, t.Y, Zset);
        in_rectangles += s_t;
        auto zt = it->second.find(zc);
        if (zt == it->second.end()) continue;
        const std::vector<std::uint32_t>& Zt = zt->second;
        if (Rational(BigInt(Zt.size())) < out.kappa * Rational(BigInt(t.space.size()))) ++sparse_z;
        auto zp = uniformize_one_set(Zt, t.space.translated(zc), r, eps, eta_alpha, opt.budget);
        std::uint64_t s_pieces = 0;
        const Rational x_parent(BigInt(t.X.size()), BigInt(t.space.size()));
        const Rational y_parent(BigInt(t.Y.size()), BigInt(t.space.size()));
        for (auto& zpiece : zp.pieces) {
            const AffineSubspace Lp = zpiece.space.direction();
            const std::uint32_t w0 = zpiece.space.offset();
            const f2::F2Set zmem = f2::F2Set::from_members(n, zpiece.members);
            auto xs = split_by_coset(t.X, Lp);
            auto ys = split_by_coset(t.Y, Lp);
            for (auto& [kx, xpart] : xs) {
                const std::uint32_t ky = Lp.reduce(kx ^ w0);
                auto yit = ys.find(ky);
                if (yit == ys.end()) continue;
                const std::vector<std::uint32_t>& ypart = yit->second;
                const std::uint64_t mass = diagonal_count(xpart, ypart, zmem);
                if (mass == 0) continue;
                s_pieces += mass;
                const Rational cells(BigInt(Lp.size()) * Lp.size());
                if (Rational(BigInt(mass)) < small_threshold * cells) {
                    out.loss.small_pieces += mass;
                    continue;
                }
                Piece p;
                p.space = Lp;
                p.x_shift = kx;
                p.y_shift = ky;
                p.X = xpart;
                p.Y = ypart;
                p.Z = zpiece.members;
                p.mass = mass;
                p.depth = depth;
                p.certificates = {certify(p.X, p.x_coset(), r, eps, opt.budget),
                                  certify(p.Y, p.y_coset(), r, eps, opt.budget), zpiece.certificate};
                const bool dense = Rational(BigInt(p.X.size()), BigInt(Lp.size())) >= keep_fraction * x_parent &&
                                   Rational(BigInt(p.Y.size()), BigInt(Lp.size())) >= keep_fraction * y_parent;
                p.good = dense && p.certified();
                if (dense && !p.good) ++density_without_spread;
                dec.pieces.push_back(std::move(p));
            }
        }
        out.loss.z_remainder += s_t - s_pieces;
    }
    out.loss.outside_rectangles = dec.total - in_rectangles;
    if (sparse_z)
        note_once(dec.notes, std::to_string(sparse_z) +
                                 " rectangle(s) had |Z_t| < kappa |V_t|; the lemma's density padding was not applied");
    if (density_without_spread)
        note_once(dec.notes, std::to_string(density_without_spread) +
                                 " piece(s) passed the density filter without certifying spread; kept as not good");
    dec.finalize();
    return out;
}

inline Frame frame_of(const AffineSubspace& V) {
    require(V.is_linear(), "uniformization needs a linear subspace V");
    return {V, 0, 0};
}

inline std::vector<std::uint32_t> members_in(const f2::F2Set& A, const AffineSubspace& V) {
    f2::check_same_dim(A, V);
    auto m = A.members();
    for (auto v : m) require(V.contains(v), "set is not contained in the subspace");
    return m;
}

} // namespace detail

// One partitioning round of S(X, Y, Z), following the one-round lemma's construction.
inline RoundResult uniformize_three_sets_round(const f2::F2Set& X, const f2::F2Set& Y, const f2::F2Set& Z,
                                               const AffineSubspace& V, int r, const Rational& epsilon,
                                               const Rational& eta, const RoundOptions& opt = {}) {
    spread::SpreadParams{r, epsilon, spread::SpreadMode::exact(), opt.budget}.validate();
    check_eta(eta);
    const auto fr = detail::frame_of(V);
    return detail::run_round(detail::members_in(X, V), detail::members_in(Y, V), detail::members_in(Z, V), fr, r,
                             epsilon, eta, opt, 0);
}

struct RecursiveOptions {
    std::optional<int> depth;            // default ceil(20 log2(1/eta))
    std::optional<Rational> round_epsilon;  // default epsilon / 10
    std::optional<Rational> round_eta;      // default eta^2 / 100
    std::optional<int> r0;
    std::uint64_t budget = spread::kDefaultSpreadBudget;
};

inline int recursion_depth(const Rational& eta) {
    return static_cast<int>(std::ceil(20 * std::log2(1 / to_double(eta)) - 1e-12));
}

// Rounds on every piece that is not good, to the depth cap; pieces still not good there are
// dropped. A node whose three sets are already spread is kept whole. Each round applies the
// one-round lemma at a fifth of the round's eta so that it discards at most the round's eta.
inline DecompositionResult uniformize_recursive(const f2::F2Set& X, const f2::F2Set& Y, const f2::F2Set& Z,
                                                const AffineSubspace& V, int r, const Rational& epsilon,
                                                const Rational& eta, const RecursiveOptions& opt = {}) {
    spread::SpreadParams{r, epsilon, spread::SpreadMode::exact(), opt.budget}.validate();
    check_eta(eta);
    const Rational round_eps = opt.round_epsilon.value_or(epsilon / 10);
    const Rational round_eta = opt.round_eta.value_or(eta * eta / 100);
    const int cap = opt.depth.value_or(recursion_depth(eta));
    DecompositionResult res;
    res.params = {r, epsilon, eta, r, round_eps, cap, opt.budget};
    struct Node {
        std::vector<std::uint32_t> X, Y, Z;
        detail::Frame frame;
    };
    std::vector<Node> layer{{detail::members_in(X, V), detail::members_in(Y, V), detail::members_in(Z, V),
                             detail::frame_of(V)}};
    const int n = V.ambient_dim();
    res.total = detail::diagonal_count(layer[0].X, layer[0].Y, f2::F2Set::from_members(n, layer[0].Z));
    if (res.total == 0) {
        res.finalize();
        return res;
    }
    RoundOptions ropt{opt.r0, opt.budget};
    try {
        for (int depth = 0; depth < cap && !layer.empty(); ++depth) {
            res.rounds = depth + 1;
            std::vector<Node> next;
            for (auto& node : layer) {
                const auto& fr = node.frame;
                if (node.X.empty() || node.Y.empty() || node.Z.empty()) continue;
                Piece whole;
                whole.space = fr.L;
                whole.x_shift = fr.a;
                whole.y_shift = fr.b;
                whole.certificates = {detail::certify(node.X, whole.x_coset(), r, round_eps, opt.budget),
                                      detail::certify(node.Y, whole.y_coset(), r, round_eps, opt.budget),
                                      detail::certify(node.Z, whole.z_coset(), r, round_eps, opt.budget)};
                if (whole.certified()) {
                    whole.mass = detail::diagonal_count(node.X, node.Y, f2::F2Set::from_members(n, node.Z));
                    if (whole.mass == 0) continue;
                    whole.X = std::move(node.X);
                    whole.Y = std::move(node.Y);
                    whole.Z = std::move(node.Z);
                    whole.good = true;
                    whole.depth = depth;
                    res.pieces.push_back(std::move(whole));
                    continue;
                }
                auto round = detail::run_round(node.X, node.Y, node.Z, fr, r, round_eps, round_eta / 5, ropt, depth);
                for (auto& s : round.decomposition.notes) detail::note_once(res.notes, s);
                for (auto& p : round.decomposition.pieces) {
                    if (p.good) {
                        res.pieces.push_back(std::move(p));
                    } else {
                        next.push_back({std::move(p.X), std::move(p.Y), std::move(p.Z), {p.space, p.x_shift, p.y_shift}});
                    }
                }
            }
            layer = std::move(next);
        }
    } catch (const Error& e) {
        res.finalize();
        throw IncompleteDecomposition(std::string("a uniformization round failed: ") + e.what(), std::move(res));
    }
    if (!layer.empty())
        detail::note_once(res.notes, std::to_string(layer.size()) + " piece(s) not good at the depth cap were dropped");
    res.finalize();
    return res;
}

} // namespace spreadlab::uniform
