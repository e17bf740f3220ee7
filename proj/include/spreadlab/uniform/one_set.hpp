#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdint>
#include <span>
#include <vector>

#include "../f2/ops.hpp"
#include "../f2/set.hpp"
#include "../spread/algebraic.hpp"
#include "decomposition.hpp"

namespace spreadlab::uniform {

struct OneSetPiece {
    AffineSubspace space = AffineSubspace::point(1, 0);  // affine V_i ⊆ V
    std::vector<std::uint32_t> members;
    Certificate certificate;
    std::vector<spread::IncrementStep> increments;  // extraction log
    Rational start_density;            // density of the remaining set in V when extracted
};

struct OneSetResult {
    std::vector<OneSetPiece> pieces;          // in extraction order
    std::vector<std::uint32_t> remainder;     // ascending
    AffineSubspace space;
    int r = 1;
    Rational epsilon;
    Rational eta;

    // The remark's cap 2^{(1 + r/eps) log2(1/eta)} on the piece count, as log2.
    double log2_piece_cap() const {
        return (1 + r / to_double(epsilon)) * std::log2(1 / to_double(eta));
    }
    // r * ceil(eps^-1 log2(1/eta)): the codimension any piece may lose.
    int codim_allowance() const {
        return r * static_cast<int>(std::ceil(std::log2(1 / to_double(eta)) / to_double(epsilon) - 1e-12));
    }
};

inline void check_eta(const Rational& eta) { require(eta > 0 && eta < 1, "eta must lie in (0, 1)"); }

// Peels spread subsets off X until at most eta |V| points remain.
inline OneSetResult uniformize_one_set(std::span<const std::uint32_t> X, const AffineSubspace& V, int r,
                                       const Rational& epsilon, const Rational& eta,
                                       std::uint64_t budget = spread::kDefaultSpreadBudget) {
    spread::SpreadParams{r, epsilon, spread::SpreadMode::exact(), budget}.validate();
    check_eta(eta);
    OneSetResult out{{}, {X.begin(), X.end()}, V, r, epsilon, eta};
    std::sort(out.remainder.begin(), out.remainder.end());
    for (auto v : out.remainder) require(V.contains(v), "set is not contained in the subspace");
    const Rational stop = eta * Rational(BigInt(V.size()));
    while (!out.remainder.empty() && Rational(BigInt(out.remainder.size())) > stop) {
        OneSetPiece piece;
        piece.start_density = Rational(BigInt(out.remainder.size()), BigInt(V.size()));
        auto e = spread::extract_spread_subset(out.remainder, V, r, epsilon, budget);
        piece.space = e.space;
        piece.members = std::move(e.members);
        std::sort(piece.members.begin(), piece.members.end());
        piece.certificate = std::move(e.certificate);
        piece.increments = std::move(e.log);
        std::vector<std::uint32_t> rest;
        rest.reserve(out.remainder.size() - piece.members.size());
        std::set_difference(out.remainder.begin(), out.remainder.end(), piece.members.begin(), piece.members.end(),
                            std::back_inserter(rest));
        out.remainder = std::move(rest);
        out.pieces.push_back(std::move(piece));
    }
    return out;
}

inline OneSetResult uniformize_one_set(const f2::F2Set& X, const AffineSubspace& V, int r, const Rational& epsilon,
                                       const Rational& eta, std::uint64_t budget = spread::kDefaultSpreadBudget) {
    f2::check_same_dim(X, V);
    const auto m = X.members();
    return uniformize_one_set(m, V, r, epsilon, eta, budget);
}

} // namespace spreadlab::uniform
