#pragma once

#include <bit>
#include <cstdint>
#include <span>

namespace spreadlab {

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

inline std::uint64_t low_mask(int bits) {
    return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

inline constexpr std::uint64_t kSwapMasks[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// Swaps bit i with bit i^(1<<k) for every i, i.e. translates a 64-point block by 2^k.
inline std::uint64_t swap_bit_blocks(std::uint64_t w, int k) {
    const int s = 1 << k;
    const std::uint64_t m = kSwapMasks[k];
    return ((w & m) << s) | ((w >> s) & m);
}

// out[j] encodes {p + v : p in in}, where in/out are bitsets over 2^n points packed
// LSB-first into words. For n < 6 only the low 2^n bits of the single word are used.
inline void translate_bitset(std::span<const std::uint64_t> in, std::span<std::uint64_t> out,
                             std::uint32_t v, int n) {
    const int low_bits = n < 6 ? n : 6;
    const std::uint32_t high = v >> 6;
    const std::uint32_t low = v & ((1u << low_bits) - 1);
    for (std::size_t j = 0; j < in.size(); ++j) {
        std::uint64_t w = in[j];
        for (int k = 0; k < low_bits; ++k)
            if (low >> k & 1) w = swap_bit_blocks(w, k);
        out[j ^ high] = w;
    }
    if (n < 6) out[0] &= low_mask(1 << n);
}

} // namespace spreadlab
