#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "../core/rational.hpp"
#include "../f2/set.hpp"
#include "entropy.hpp"

namespace spreadlab::info {

// A set T ⊆ (F_2^n)^3 given by its fibers: fiber(x, y, out) writes {w : (x,y,w) in T} as a
// 2^n-bit bitset into out[0 .. word_count(n)).
template <class Fiber>
concept FiberProvider = requires(const Fiber& f, std::uint32_t x, std::uint64_t* out) {
    f(x, x, out);
};

inline auto full_cube_fibers(int n) {
    const f2::F2Set all = f2::F2Set::full(n);
    return [all](std::uint32_t, std::uint32_t, std::uint64_t* out) {
        std::copy(all.words().begin(), all.words().end(), out);
    };
}

// {(x, y, w) : w = x}.
inline auto graph_fibers(int n) {
    const std::size_t stride = f2::F2Set::word_count(n);
    return [stride](std::uint32_t x, std::uint32_t, std::uint64_t* out) {
        std::fill(out, out + stride, 0);
        out[x >> 6] |= std::uint64_t{1} << (x & 63);
    };
}

// T stored as a subset of F_2^{3n} with point (x, y, w) at index (x << 2n) | (y << n) | w.
inline auto explicit_fibers(const f2::F2Set& T, int n) {
    require(T.ambient_dim() == 3 * n, "triple set must live in F_2^{3n}");
    const std::size_t stride = f2::F2Set::word_count(n);
    return [&T, n, stride](std::uint32_t x, std::uint32_t y, std::uint64_t* out) {
        const std::uint64_t base = ((std::uint64_t{x} << n) | y) << n;
        if (n >= 6) {
            std::copy_n(T.words().begin() + (base >> 6), stride, out);
        } else {
            out[0] = (T.words()[base >> 6] >> (base & 63)) & low_mask(1 << n);
        }
    };
}

struct MarginalReport {
    std::uint64_t total = 0;                          // |T|
    std::vector<std::uint64_t> coordinate_mass;       // |{(x,y,w) in T : w_i = 1}|
    std::vector<std::optional<Rational>> per_coordinate;
    std::vector<int> excluded;                        // i with no mass on w_i = 1
    Rational mean;                                    // over included i
    double conditional_entropy = 0;                   // H(W | X, Y) in bits
};

// ||P_{XY | W_i = 1} - P_{XY}||_1 for (X, Y, W) uniform on T.
template <FiberProvider Fiber>
MarginalReport conditional_marginal_report(int n, const Fiber& fiber) {
    f2::check_dim(n);
    const std::size_t stride = f2::F2Set::word_count(n);
    const std::uint32_t N = std::uint32_t{1} << n;
    std::vector<std::vector<std::uint64_t>> masks(n, std::vector<std::uint64_t>(stride, 0));
    for (std::uint32_t w = 0; w < N; ++w)
        for (int i = 0; i < n; ++i)
            if ((w >> i) & 1u) masks[i][w >> 6] |= std::uint64_t{1} << (w & 63);
    std::vector<std::uint64_t> buf(stride);
    auto fiber_counts = [&](std::uint32_t x, std::uint32_t y, std::vector<std::uint64_t>& per_i) {
        fiber(x, y, buf.data());
        std::uint64_t c = 0;
        for (auto w : buf) c += std::popcount(w);
        for (int i = 0; i < n; ++i) {
            std::uint64_t ci = 0;
            for (std::size_t k = 0; k < stride; ++k) ci += std::popcount(buf[k] & masks[i][k]);
            per_i[i] = ci;
        }
        return c;
    };
    MarginalReport r;
    r.coordinate_mass.assign(n, 0);
    std::vector<std::uint64_t> per_i(n);
    double weighted_log = 0;
    for (std::uint32_t x = 0; x < N; ++x)
        for (std::uint32_t y = 0; y < N; ++y) {
            const std::uint64_t c = fiber_counts(x, y, per_i);
            r.total += c;
            if (c) weighted_log += static_cast<double>(c) * std::log2(static_cast<double>(c));
            for (int i = 0; i < n; ++i) r.coordinate_mass[i] += per_i[i];
        }
    if (r.total == 0) throw InputError("conditional marginal report needs a nonempty triple set");
    r.conditional_entropy = weighted_log / static_cast<double>(r.total);
    using u128 = unsigned __int128;
    std::vector<u128> acc(n, 0);
    for (std::uint32_t x = 0; x < N; ++x)
        for (std::uint32_t y = 0; y < N; ++y) {
            const std::uint64_t c = fiber_counts(x, y, per_i);
            for (int i = 0; i < n; ++i) {
                const u128 a = u128(per_i[i]) * r.total;
                const u128 b = u128(c) * r.coordinate_mass[i];
                acc[i] += a > b ? a - b : b - a;
            }
        }
    Rational sum = 0;
    for (int i = 0; i < n; ++i) {
        if (r.coordinate_mass[i] == 0) {
            r.per_coordinate.push_back(std::nullopt);
            r.excluded.push_back(i);
            continue;
        }
        Rational d = frac_u128(acc[i], u128(r.total) * r.coordinate_mass[i]);
        sum += d;
        r.per_coordinate.push_back(d);
    }
    const auto included = n - static_cast<int>(r.excluded.size());
    r.mean = included ? sum / included : Rational(0);
    return r;
}

} // namespace spreadlab::info
