#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>

#include "../core/error.hpp"

namespace spreadlab::f2 {

inline constexpr int kMaxDim = 24;

inline void check_dim(int n) {
    require(n >= 1 && n <= kMaxDim,
            "ambient dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                std::to_string(n));
}

inline std::uint32_t universe_size(int n) { return std::uint32_t{1} << n; }

// Bit i of `bits` is coordinate i.
class F2Vector {
public:
    F2Vector(std::uint32_t bits, int n) : bits_(bits), n_(n) {
        check_dim(n);
        require(bits < universe_size(n), "vector " + std::to_string(bits) +
                                             " does not fit in dimension " + std::to_string(n));
    }

    std::uint32_t bits() const { return bits_; }
    int ambient_dim() const { return n_; }
    int weight() const { return std::popcount(bits_); }
    bool coordinate(int i) const { return (bits_ >> i) & 1u; }

    friend auto operator<=>(const F2Vector&, const F2Vector&) = default;

private:
    std::uint32_t bits_;
    int n_;
};

inline F2Vector vec_add(const F2Vector& u, const F2Vector& v) {
    require(u.ambient_dim() == v.ambient_dim(),
            "vector dimension mismatch: " + std::to_string(u.ambient_dim()) + " vs " +
                std::to_string(v.ambient_dim()));
    return F2Vector(u.bits() ^ v.bits(), u.ambient_dim());
}

inline F2Vector operator+(const F2Vector& u, const F2Vector& v) { return vec_add(u, v); }

} // namespace spreadlab::f2
