#pragma once

// Seeded instance generators shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include <spreadlab/core/rng.hpp>
#include <spreadlab/f2/ops.hpp>
#include <spreadlab/f2/set.hpp>
#include <spreadlab/f2/subspace.hpp>

namespace gen {

using spreadlab::Rational;
using spreadlab::Rng;
using spreadlab::f2::AffineSubspace;
using spreadlab::f2::F2Set;

struct Triple {
    F2Set X, Y, Z;
};

// X, Y, Z drawn in that order from one stream seeded with `seed`.
inline Triple random_triple(int n, const Rational& density, std::uint64_t seed) {
    Rng rng(seed);
    F2Set X = spreadlab::f2::random_set(n, density, rng);
    F2Set Y = spreadlab::f2::random_set(n, density, rng);
    F2Set Z = spreadlab::f2::random_set(n, density, rng);
    return {std::move(X), std::move(Y), std::move(Z)};
}

inline F2Set random_set(int n, const Rational& density, std::uint64_t seed) {
    Rng rng(seed);
    return spreadlab::f2::random_set(n, density, rng);
}

inline F2Set random_nonempty_set(int n, Rng& rng) {
    const std::uint64_t total = std::uint64_t{1} << n;
    return spreadlab::f2::random_set_of_size(n, 1 + rng.below(total), rng);
}

// {v : v_0 + ... + v_{n-1} = 0} when `k` is 1; more generally the first k parity checks
// v_0 + v_i = 0 for i = 1..k.
inline AffineSubspace checks_subspace(int n, int k, std::uint32_t offset = 0) {
    std::vector<std::uint32_t> gens;
    if (k == 1) {
        for (int i = 1; i < n; ++i) gens.push_back(1u | (1u << i));
    } else {
        std::uint32_t first = 1;
        for (int i = 1; i <= k; ++i) first |= 1u << i;
        gens.push_back(first);
        for (int i = k + 1; i < n; ++i) gens.push_back(1u << i);
    }
    return AffineSubspace::span(n, gens, offset);
}

inline F2Set even_weight_set(int n) { return spreadlab::f2::as_set(checks_subspace(n, 1)); }

inline F2Set add_random_points(F2Set A, std::uint64_t extra, Rng& rng) {
    const std::uint64_t target = A.size() + extra;
    while (A.size() < target) A.insert(static_cast<std::uint32_t>(rng.below(A.universe())));
    return A;
}

} // namespace gen
