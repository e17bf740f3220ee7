#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "../core/error.hpp"
#include "../core/rational.hpp"
#include "../f2/subspace.hpp"
#include "../spread/params.hpp"

namespace spreadlab::uniform {

using f2::AffineSubspace;
using Certificate = spread::SpreadVerdict<AffineSubspace>;

// X ⊆ x_shift + space, Y ⊆ y_shift + space, Z ⊆ x_shift + y_shift + space, with space linear
// and both shifts reduced modulo it. Rectangles from the two-set step leave Z empty.
struct Piece {
    AffineSubspace space = AffineSubspace::point(1, 0);
    std::uint32_t x_shift = 0;
    std::uint32_t y_shift = 0;
    std::vector<std::uint32_t> X, Y, Z;  // ascending
    std::vector<Certificate> certificates;  // for X, Y and, if present, Z
    bool good = false;
    int depth = 0;
    std::uint64_t mass = 0;  // |X x Y| for rectangles, |S(X, Y, Z)| otherwise

    AffineSubspace x_coset() const { return space.translated(x_shift); }
    AffineSubspace y_coset() const { return space.translated(y_shift); }
    AffineSubspace z_coset() const { return space.translated(x_shift ^ y_shift); }
    bool is_rectangle() const { return Z.empty(); }

    bool certified() const {
        return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.passed; });
    }
};

inline bool canonical_less(const Piece& a, const Piece& b) {
    return std::tie(a.space, a.x_shift, a.y_shift, a.Z, a.X, a.Y) <
           std::tie(b.space, b.x_shift, b.y_shift, b.Z, b.X, b.Y);
}

inline void sort_canonically(std::vector<Piece>& pieces) { std::sort(pieces.begin(), pieces.end(), canonical_less); }

struct DecompositionParams {
    int r = 1;
    Rational epsilon;
    Rational eta;
    int cert_r = 1;        // parameters every good piece is certified at
    Rational cert_epsilon;
    int depth_cap = 0;
    std::uint64_t budget = spread::kDefaultSpreadBudget;
};

struct DecompositionResult {
    std::vector<Piece> pieces;   // canonical order
    std::vector<std::size_t> good;
    std::uint64_t total = 0;     // |S(X, Y, Z)|
    std::uint64_t covered = 0;   // sum of piece masses
    std::uint64_t remainder = 0; // total - covered
    std::uint64_t good_mass = 0;
    int rounds = 0;              // recursion depth reached
    DecompositionParams params;
    std::vector<std::string> notes;  // bounds used outside their hypotheses

    void finalize() {
        sort_canonically(pieces);
        good.clear();
        covered = good_mass = 0;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            covered += pieces[k].mass;
            if (pieces[k].good) {
                good.push_back(k);
                good_mass += pieces[k].mass;
            }
        }
        remainder = total - covered;
    }
};

// A decomposition stopped before its postconditions were reached; carries what it had.
class IncompleteDecomposition : public PostconditionError {
public:
    IncompleteDecomposition(const std::string& what, DecompositionResult partial)
        : PostconditionError(what), partial_(std::make_shared<DecompositionResult>(std::move(partial))) {}
    const DecompositionResult& partial() const { return *partial_; }

private:
    std::shared_ptr<const DecompositionResult> partial_;
};

inline AffineSubspace linear_part(const AffineSubspace& V) { return V.direction(); }

} // namespace spreadlab::uniform
