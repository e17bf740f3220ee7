#pragma once

#include <cstdint>
#include <vector>

#include "../core/rational.hpp"
#include "set.hpp"
#include "subspace.hpp"

namespace spreadlab::f2 {

inline void check_same_dim(const F2Set& A, const AffineSubspace& V) {
    require(A.ambient_dim() == V.ambient_dim(),
            "set/subspace dimension mismatch: " + std::to_string(A.ambient_dim()) + " vs " +
                std::to_string(V.ambient_dim()));
}

inline std::uint64_t count_in(const F2Set& A, const AffineSubspace& V) {
    check_same_dim(A, V);
    std::uint64_t c = 0;
    if (V.size() <= A.size()) {
        V.for_each_point([&](std::uint32_t v) { c += A.contains(v); });
    } else {
        A.for_each([&](std::uint32_t v) { c += V.contains(v); });
    }
    return c;
}

// |A ∩ V| / |V|.
inline Rational density(const F2Set& A, const AffineSubspace& V) {
    return Rational(BigInt(count_in(A, V)), BigInt(V.size()));
}

inline F2Set restrict_to(const F2Set& A, const AffineSubspace& V) {
    check_same_dim(A, V);
    F2Set out(A.ambient_dim());
    if (V.size() <= A.size()) {
        V.for_each_point([&](std::uint32_t v) {
            if (A.contains(v)) out.insert(v);
        });
    } else {
        A.for_each([&](std::uint32_t v) {
            if (V.contains(v)) out.insert(v);
        });
    }
    return out;
}

inline bool is_subset_of(const F2Set& A, const AffineSubspace& V) {
    check_same_dim(A, V);
    bool ok = true;
    A.for_each([&](std::uint32_t v) { ok = ok && V.contains(v); });
    return ok;
}

inline F2Set as_set(const AffineSubspace& V) {
    F2Set out(V.ambient_dim());
    V.for_each_point([&](std::uint32_t v) { out.insert(v); });
    return out;
}

// |{(x, y) : x in A, y in B, x + y in C}| = sum over x in A of |B ∩ (C + x)|.
inline std::uint64_t diagonal_product_size(const F2Set& A, const F2Set& B, const F2Set& C) {
    require(A.ambient_dim() == B.ambient_dim() && B.ambient_dim() == C.ambient_dim(),
            "set dimension mismatch");
    std::uint64_t total = 0;
    A.for_each([&](std::uint32_t x) { total += B.intersection_size(C.translated(x)); });
    return total;
}

// <phi_A * phi_B, phi_C> with phi_S = 1_S / density(S); equals |S(A,B,C)| 2^n / (|A||B||C|).
inline Rational convolution_inner_product(const F2Set& A, const F2Set& B, const F2Set& C) {
    require(!A.empty() && !B.empty() && !C.empty(), "convolution_inner_product needs nonempty sets");
    const std::uint64_t s = diagonal_product_size(A, B, C);
    BigInt num = BigInt(s) * A.universe();
    BigInt den = BigInt(A.size()) * B.size() * C.size();
    return Rational(num, den);
}

} // namespace spreadlab::f2
