#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "../core/rational.hpp"
#include "subspace.hpp"

namespace spreadlab::f2 {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 32;

// Number of k-dimensional linear subspaces of F_2^d.
inline BigInt gaussian_binomial(int d, int k) {
    if (k < 0 || k > d) return 0;
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= (BigInt(1) << d) - (BigInt(1) << i);
        den *= (BigInt(1) << k) - (BigInt(1) << i);
    }
    return num / den;
}

inline BigInt affine_subspace_count(int d, int codim) {
    return gaussian_binomial(d, codim) << codim;
}

// Calls f(rows) for every k x d matrix over F_2 of rank k in reduced echelon form
// (row j has pivot = its highest bit, pivots ascending, pivot bits cleared in other rows).
// Each k-dimensional subspace of F_2^d is the row space of exactly one such matrix.
template <class F>
void for_each_echelon_matrix(int d, int k, F&& f) {
    if (k < 0 || k > d) return;
    std::vector<std::uint32_t> rows(k);
    if (k == 0) {
        f(std::span<const std::uint32_t>(rows));
        return;
    }
    std::vector<std::vector<int>> free_bits(k);
    const std::uint32_t limit = std::uint32_t{1} << d;
    for (std::uint32_t pivots = (std::uint32_t{1} << k) - 1; pivots < limit;) {
        int total_free = 0;
        int j = 0;
        for (int p = 0; p < d; ++p) {
            if (!((pivots >> p) & 1u)) continue;
            free_bits[j].clear();
            for (int q = 0; q < p; ++q)
                if (!((pivots >> q) & 1u)) free_bits[j].push_back(q);
            total_free += static_cast<int>(free_bits[j].size());
            rows[j] = std::uint32_t{1} << p;
            ++j;
        }
        std::vector<std::uint32_t> base(rows);
        const std::uint64_t combos = std::uint64_t{1} << total_free;
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t bits = c;
            for (int r = 0; r < k; ++r) {
                std::uint32_t row = base[r];
                for (int q : free_bits[r]) {
                    if (bits & 1u) row |= std::uint32_t{1} << q;
                    bits >>= 1;
                }
                rows[r] = row;
            }
            f(std::span<const std::uint32_t>(rows));
        }
        // next k-subset of [0, d) (Gosper)
        const std::uint32_t low = pivots & (0u - pivots);
        const std::uint32_t ripple = pivots + low;
        pivots = ripple | (((pivots ^ ripple) >> 2) / low);
    }
}

// Kernel of an echelon constraint matrix, as a basis of F_2^d.
inline std::vector<std::uint32_t> echelon_kernel(int d, std::span<const std::uint32_t> rows) {
    std::uint32_t pivots = 0;
    for (auto r : rows) pivots |= std::uint32_t{1} << pivot_of(r);
    std::vector<std::uint32_t> kernel;
    for (int c = 0; c < d; ++c) {
        if ((pivots >> c) & 1u) continue;
        std::uint32_t t = std::uint32_t{1} << c;
        for (auto r : rows)
            if ((r >> c) & 1u) t |= std::uint32_t{1} << pivot_of(r);
        kernel.push_back(t);
    }
    return kernel;
}

// A t with rows[j] . t = bit j of rhs for all j.
inline std::uint32_t echelon_particular_solution(std::span<const std::uint32_t> rows,
                                                 std::uint32_t rhs) {
    std::uint32_t t = 0;
    for (std::size_t j = 0; j < rows.size(); ++j)
        if ((rhs >> j) & 1u) t |= std::uint32_t{1} << pivot_of(rows[j]);
    return t;
}

inline std::uint32_t local_to_ambient_linear(const AffineSubspace& V, std::uint32_t t) {
    return V.point_at(t) ^ V.offset();
}

// The affine subspace {t in F_2^d : rows . t = rhs} of V's local coordinates, in ambient form.
inline AffineSubspace subspace_from_constraints(const AffineSubspace& V,
                                                std::span<const std::uint32_t> rows,
                                                std::uint32_t rhs) {
    std::vector<std::uint32_t> gens;
    for (auto t : echelon_kernel(V.dim(), rows)) gens.push_back(local_to_ambient_linear(V, t));
    return AffineSubspace::span(V.ambient_dim(), gens,
                                V.point_at(echelon_particular_solution(rows, rhs)));
}

// offset + span(rows) in V's local coordinates, in ambient form.
inline AffineSubspace subspace_from_generators(const AffineSubspace& V,
                                               std::span<const std::uint32_t> rows,
                                               std::uint32_t local_offset) {
    std::vector<std::uint32_t> gens;
    for (auto t : rows) gens.push_back(local_to_ambient_linear(V, t));
    return AffineSubspace::span(V.ambient_dim(), gens, V.point_at(local_offset));
}

inline void check_enumeration_budget(const BigInt& work, std::uint64_t budget,
                                     const std::string& what) {
    if (work > BigInt(budget))
        throw BudgetError(what + " needs " + work.str() + " units of work, over the budget of " +
                          std::to_string(budget) + "; use sampled mode instead");
}

// Every affine subspace of V with dimension dim(V) - codim, each exactly once.
template <class F>
void enumerate_affine_subspaces(const AffineSubspace& V, int codim, F&& f,
                                std::uint64_t budget = kDefaultEnumerationBudget) {
    require(codim >= 0 && codim <= V.dim(), "codimension " + std::to_string(codim) +
                                                " outside [0, " + std::to_string(V.dim()) + "]");
    check_enumeration_budget(affine_subspace_count(V.dim(), codim), budget,
                             "exact subspace enumeration");
    for_each_echelon_matrix(V.dim(), codim, [&](std::span<const std::uint32_t> rows) {
        for (std::uint32_t rhs = 0; rhs < (std::uint32_t{1} << codim); ++rhs)
            f(subspace_from_constraints(V, rows, rhs));
    });
}

inline std::vector<AffineSubspace> affine_subspaces(const AffineSubspace& V, int codim,
                                                    std::uint64_t budget = kDefaultEnumerationBudget) {
    std::vector<AffineSubspace> out;
    enumerate_affine_subspaces(V, codim, [&](const AffineSubspace& s) { out.push_back(s); }, budget);
    return out;
}

} // namespace spreadlab::f2
