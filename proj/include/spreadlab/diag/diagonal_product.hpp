#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "../core/error.hpp"
#include "../f2/set.hpp"
#include "../f2/vector.hpp"

namespace spreadlab::diag {

using f2::F2Set;

struct Pair {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    friend auto operator<=>(const Pair&, const Pair&) = default;
};

inline constexpr std::uint64_t kDefaultMaxPairs = std::uint64_t{1} << 30;

// S(X,Y,Z) = {(x,y) : x in X, y in Y, x+y in Z} as one 2^n-bit row per x.
class DiagonalProduct {
public:
    DiagonalProduct(F2Set X, F2Set Y, F2Set Z, std::uint64_t max_pairs = kDefaultMaxPairs)
        : X_(std::move(X)), Y_(std::move(Y)), Z_(std::move(Z)) {
        require(X_.ambient_dim() == Y_.ambient_dim() && Y_.ambient_dim() == Z_.ambient_dim(),
                "diagonal product needs sets of equal ambient dimension");
        n_ = X_.ambient_dim();
        const std::uint64_t cells = std::uint64_t{1} << (2 * n_);
        if (cells > max_pairs)
            throw BudgetError("diagonal product over F_2^" + std::to_string(n_) + " needs " +
                              std::to_string(cells) + " pair bits, over the budget of " +
                              std::to_string(max_pairs));
        stride_ = F2Set::word_count(n_);
        rows_.assign(std::size_t{1} << n_, {});
        X_.for_each([&](std::uint32_t x) {
            F2Set row = Y_ & Z_.translated(x);
            size_ += row.size();
            rows_[x].assign(row.words().begin(), row.words().end());
        });
    }

    int ambient_dim() const { return n_; }
    std::uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const F2Set& X() const { return X_; }
    const F2Set& Y() const { return Y_; }
    const F2Set& Z() const { return Z_; }
    std::size_t stride() const { return stride_; }

    bool contains(std::uint32_t x, std::uint32_t y) const {
        if (x >= rows_.size() || y >= rows_.size() || rows_[x].empty()) return false;
        return (rows_[x][y >> 6] >> (y & 63)) & 1u;
    }

    // Empty span for x outside X.
    std::span<const std::uint64_t> row(std::uint32_t x) const { return rows_[x]; }

    // Ascending in (x, y).
    template <class F>
    void for_each(F&& f) const {
        for (std::uint32_t x = 0; x < rows_.size(); ++x) {
            const auto& r = rows_[x];
            for (std::size_t j = 0; j < r.size(); ++j) {
                std::uint64_t w = r[j];
                while (w) {
                    f(x, static_cast<std::uint32_t>((j << 6) | std::countr_zero(w)));
                    w &= w - 1;
                }
            }
        }
    }

    std::vector<Pair> pairs() const {
        std::vector<Pair> out;
        out.reserve(size_);
        for_each([&](std::uint32_t x, std::uint32_t y) { out.push_back({x, y}); });
        return out;
    }

private:
    int n_ = 0;
    F2Set X_, Y_, Z_;
    std::size_t stride_ = 1;
    std::vector<std::vector<std::uint64_t>> rows_;
    std::uint64_t size_ = 0;
};

inline DiagonalProduct build_diagonal_product(const F2Set& X, const F2Set& Y, const F2Set& Z,
                                              std::uint64_t max_pairs = kDefaultMaxPairs) {
    return DiagonalProduct(X, Y, Z, max_pairs);
}

// s_{x,y,w}; (x, y) is the lexicographically smallest of the four representations.
struct Square {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t w = 0;

    static Square canonical(std::uint32_t x, std::uint32_t y, std::uint32_t w) {
        return {std::min(x, x ^ w), std::min(y, y ^ w), w};
    }

    std::array<Pair, 4> points() const {
        return {Pair{x, y}, Pair{x ^ w, y}, Pair{x, y ^ w}, Pair{x ^ w, y ^ w}};
    }

    bool is_nontrivial(int i) const { return (w >> i) & 1u; }

    std::vector<int> nontrivial_coordinates() const {
        std::vector<int> out;
        for (int i = 0; i < 32; ++i)
            if (is_nontrivial(i)) out.push_back(i);
        return out;
    }

    friend auto operator<=>(const Square&, const Square&) = default;
};

} // namespace spreadlab::diag
