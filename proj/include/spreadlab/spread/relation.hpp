#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "../core/rational.hpp"
#include "../f2/set.hpp"

namespace spreadlab::spread {

// f : [left] x [right] -> {0,1}, one bit row per left element.
class BipartiteRelation {
public:
    BipartiteRelation(std::size_t left, std::size_t right)
        : left_(left), right_(right), stride_((right + 63) / 64), bits_(left * stride_, 0) {
        require(left > 0 && right > 0, "relation sides must be nonempty");
    }

    template <class F>
    static BipartiteRelation from_function(std::size_t left, std::size_t right, F&& f) {
        BipartiteRelation rel(left, right);
        for (std::size_t i = 0; i < left; ++i)
            for (std::size_t j = 0; j < right; ++j)
                if (f(i, j)) rel.set(i, j, true);
        return rel;
    }

    std::size_t left_size() const { return left_; }
    std::size_t right_size() const { return right_; }
    std::uint64_t ones() const { return ones_; }
    Rational mean() const { return Rational(BigInt(ones_), BigInt(left_) * right_); }

    bool at(std::size_t i, std::size_t j) const {
        return (bits_[i * stride_ + j / 64] >> (j % 64)) & 1u;
    }

    void set(std::size_t i, std::size_t j, bool value) {
        require(i < left_ && j < right_, "relation index out of range");
        auto& w = bits_[i * stride_ + j / 64];
        const std::uint64_t bit = std::uint64_t{1} << (j % 64);
        if (((w & bit) != 0) == value) return;
        w ^= bit;
        ones_ += value ? 1 : -1;
    }

    std::span<const std::uint64_t> row(std::size_t i) const {
        return std::span<const std::uint64_t>(bits_).subspan(i * stride_, stride_);
    }

    std::uint64_t row_ones(std::size_t i) const {
        std::uint64_t c = 0;
        for (auto w : row(i)) c += std::popcount(w);
        return c;
    }

    BipartiteRelation transposed() const {
        BipartiteRelation t(right_, left_);
        for (std::size_t i = 0; i < left_; ++i)
            for (std::size_t j = 0; j < right_; ++j)
                if (at(i, j)) t.set(j, i, true);
        return t;
    }

private:
    std::size_t left_, right_, stride_;
    std::vector<std::uint64_t> bits_;
    std::uint64_t ones_ = 0;
};

// Rows are the members of X ascending, columns the members of Y ascending; f = 1[x+y in Z].
inline BipartiteRelation sum_set_relation(const f2::F2Set& X, const f2::F2Set& Y, const f2::F2Set& Z) {
    require(!X.empty() && !Y.empty(), "sum_set_relation needs nonempty X and Y");
    require(X.ambient_dim() == Y.ambient_dim() && Y.ambient_dim() == Z.ambient_dim(),
            "set dimension mismatch");
    const auto xs = X.members();
    const auto ys = Y.members();
    BipartiteRelation rel(xs.size(), ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j)
            if (Z.contains(xs[i] ^ ys[j])) rel.set(i, j, true);
    return rel;
}

} // namespace spreadlab::spread
