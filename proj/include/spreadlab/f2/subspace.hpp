#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "vector.hpp"

namespace spreadlab::f2 {

inline int pivot_of(std::uint32_t v) { return 31 - std::countl_zero(v); }

// offset + span(basis) inside F_2^n, kept canonical: basis_ is the reduced echelon form
// (pivot = highest set bit, each pivot bit appears in exactly one basis vector, sorted by
// ascending pivot) and offset_ has every pivot bit cleared. Equal point sets therefore
// compare equal, and operator<=> is a total order on subspaces.
class AffineSubspace {
public:
    static AffineSubspace full(int n) {
        std::vector<std::uint32_t> e;
        for (int i = 0; i < n; ++i) e.push_back(std::uint32_t{1} << i);
        return span(n, e);
    }

    static AffineSubspace point(int n, std::uint32_t v) { return span(n, {}, v); }

    // Generators need not be independent.
    static AffineSubspace span(int n, std::span<const std::uint32_t> generators,
                               std::uint32_t offset = 0) {
        AffineSubspace s(n);
        require(offset < universe_size(n), "offset outside ambient space");
        for (auto g : generators) {
            require(g < universe_size(n), "generator outside ambient space");
            s.add_generator(g);
        }
        s.offset_ = s.reduce(offset);
        return s;
    }

    static AffineSubspace span(int n, std::initializer_list<std::uint32_t> generators,
                               std::uint32_t offset = 0) {
        std::vector<std::uint32_t> g(generators);
        return span(n, g, offset);
    }

    // Rejects dependent generators instead of silently dropping them.
    static AffineSubspace from_independent(int n, std::span<const std::uint32_t> basis,
                                           std::uint32_t offset) {
        AffineSubspace s = span(n, basis, offset);
        require(s.dim() == static_cast<int>(basis.size()), "basis vectors are linearly dependent");
        return s;
    }

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int codim() const { return n_ - dim(); }
    std::uint64_t size() const { return std::uint64_t{1} << dim(); }
    std::uint32_t offset() const { return offset_; }
    const std::vector<std::uint32_t>& basis() const { return basis_; }
    bool is_linear() const { return offset_ == 0; }

    std::uint32_t pivot_mask() const {
        std::uint32_t m = 0;
        for (auto b : basis_) m |= std::uint32_t{1} << pivot_of(b);
        return m;
    }

    // Canonical representative of v modulo the direction space (pivot bits cleared).
    std::uint32_t reduce(std::uint32_t v) const {
        for (auto it = basis_.rbegin(); it != basis_.rend(); ++it)
            if ((v >> pivot_of(*it)) & 1u) v ^= *it;
        return v;
    }

    bool contains(std::uint32_t v) const { return v < universe_size(n_) && reduce(v ^ offset_) == 0; }

    bool contains(const AffineSubspace& o) const {
        if (o.n_ != n_ || !contains(o.offset_)) return false;
        return std::all_of(o.basis_.begin(), o.basis_.end(),
                           [&](std::uint32_t b) { return reduce(b) == 0; });
    }

    AffineSubspace direction() const {
        AffineSubspace d = *this;
        d.offset_ = 0;
        return d;
    }

    AffineSubspace translated(std::uint32_t v) const {
        require(v < universe_size(n_), "translation outside ambient space");
        AffineSubspace t = *this;
        t.offset_ = reduce(offset_ ^ v);
        return t;
    }

    // Coordinates of a member with respect to the basis: bit j <-> basis_[j].
    std::uint32_t local_coordinates(std::uint32_t v) const {
        std::uint32_t d = v ^ offset_;
        std::uint32_t c = 0;
        for (std::size_t j = 0; j < basis_.size(); ++j)
            if ((d >> pivot_of(basis_[j])) & 1u) c |= std::uint32_t{1} << j;
        return c;
    }

    std::uint32_t point_at(std::uint32_t coords) const {
        std::uint32_t v = offset_;
        for (std::size_t j = 0; j < basis_.size(); ++j)
            if ((coords >> j) & 1u) v ^= basis_[j];
        return v;
    }

    template <class F>
    void for_each_point(F&& f) const {
        // Gray-code walk: one XOR per point.
        std::uint32_t v = offset_;
        f(v);
        const std::uint64_t total = size();
        for (std::uint64_t i = 1; i < total; ++i) {
            v ^= basis_[std::countr_zero(i)];
            f(v);
        }
    }

    std::vector<std::uint32_t> points() const {
        std::vector<std::uint32_t> out;
        out.reserve(size());
        for_each_point([&](std::uint32_t v) { out.push_back(v); });
        std::sort(out.begin(), out.end());
        return out;
    }

    friend auto operator<=>(const AffineSubspace&, const AffineSubspace&) = default;
    friend bool operator==(const AffineSubspace&, const AffineSubspace&) = default;

private:
    explicit AffineSubspace(int n) : n_(n) { check_dim(n); }

    void add_generator(std::uint32_t g) {
        g = reduce(g);
        if (g == 0) return;
        const int p = pivot_of(g);
        const std::uint32_t bit = std::uint32_t{1} << p;
        for (auto& b : basis_)
            if (b & bit) b ^= g;
        basis_.insert(std::upper_bound(basis_.begin(), basis_.end(), g,
                                       [](std::uint32_t a, std::uint32_t b) {
                                           return pivot_of(a) < pivot_of(b);
                                       }),
                      g);
    }

    int n_;
    std::vector<std::uint32_t> basis_;
    std::uint32_t offset_ = 0;
};

// One canonical representative per coset of the linear subspace W inside V, ascending.
inline std::vector<std::uint32_t> coset_decompose(const AffineSubspace& V, const AffineSubspace& W) {
    require(V.ambient_dim() == W.ambient_dim(), "subspace dimension mismatch");
    require(W.is_linear(), "coset_decompose needs a linear subspace W");
    require(V.direction().contains(W), "W is not contained in the direction space of V");
    std::vector<std::uint32_t> complement;
    AffineSubspace grown = W;
    for (auto b : V.basis()) {
        std::vector<std::uint32_t> gens = grown.basis();
        gens.push_back(b);
        AffineSubspace next = AffineSubspace::span(V.ambient_dim(), gens);
        if (next.dim() > grown.dim()) {
            complement.push_back(b);
            grown = next;
        }
    }
    std::vector<std::uint32_t> reps;
    reps.reserve(std::size_t{1} << complement.size());
    for (std::uint32_t c = 0; c < (std::uint32_t{1} << complement.size()); ++c) {
        std::uint32_t v = V.offset();
        for (std::size_t j = 0; j < complement.size(); ++j)
            if ((c >> j) & 1u) v ^= complement[j];
        reps.push_back(W.reduce(v));
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

} // namespace spreadlab::f2
