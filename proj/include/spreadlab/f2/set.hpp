#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "../core/bits.hpp"
#include "../core/rational.hpp"
#include "../core/rng.hpp"
#include "vector.hpp"

namespace spreadlab::f2 {

// Subset of F_2^n stored as a 2^n-bit membership bitset.
class F2Set {
public:
    explicit F2Set(int n) : n_(n) {
        check_dim(n);
        words_.assign(word_count(n), 0);
    }

    static F2Set full(int n) {
        F2Set s(n);
        std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
        if (n < 6) s.words_[0] = low_mask(1 << n);
        s.size_ = universe_size(n);
        return s;
    }

    static F2Set from_members(int n, std::span<const std::uint32_t> members) {
        F2Set s(n);
        for (auto m : members) s.insert(m);
        return s;
    }

    static F2Set from_words(int n, std::vector<std::uint64_t> words) {
        F2Set s(n);
        require(words.size() == s.words_.size(), "bitset word count mismatch");
        if (n < 6) require((words[0] & ~low_mask(1 << n)) == 0, "bitset has bits beyond 2^n");
        s.words_ = std::move(words);
        s.size_ = 0;
        for (auto w : s.words_) s.size_ += std::popcount(w);
        return s;
    }

    static std::size_t word_count(int n) { return n < 6 ? 1 : (std::size_t{1} << (n - 6)); }

    int ambient_dim() const { return n_; }
    std::uint32_t universe() const { return universe_size(n_); }
    std::uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    Rational density() const { return Rational(BigInt(size_), BigInt(universe())); }

    bool contains(std::uint32_t v) const {
        return v < universe() && ((words_[v >> 6] >> (v & 63)) & 1u);
    }

    void insert(std::uint32_t v) {
        check_point(v);
        auto& w = words_[v >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (v & 63);
        if (!(w & bit)) {
            w |= bit;
            ++size_;
        }
    }

    void erase(std::uint32_t v) {
        check_point(v);
        auto& w = words_[v >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (v & 63);
        if (w & bit) {
            w &= ~bit;
            --size_;
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t j = 0; j < words_.size(); ++j) {
            std::uint64_t w = words_[j];
            while (w) {
                f(static_cast<std::uint32_t>((j << 6) | std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    // Ascending.
    std::vector<std::uint32_t> members() const {
        std::vector<std::uint32_t> out;
        out.reserve(size_);
        for_each([&](std::uint32_t v) { out.push_back(v); });
        return out;
    }

    std::span<const std::uint64_t> words() const { return words_; }

    F2Set translated(std::uint32_t v) const {
        check_point(v);
        F2Set out(n_);
        translate_bitset(words_, out.words_, v, n_);
        out.size_ = size_;
        return out;
    }

    F2Set complement() const {
        F2Set out = full(n_);
        for (std::size_t j = 0; j < words_.size(); ++j) out.words_[j] &= ~words_[j];
        out.size_ = universe() - size_;
        return out;
    }

    F2Set& operator&=(const F2Set& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
    F2Set& operator|=(const F2Set& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
    F2Set& operator-=(const F2Set& o) { return combine(o, [](auto a, auto b) { return a & ~b; }); }

    friend F2Set operator&(F2Set a, const F2Set& b) { return a &= b; }
    friend F2Set operator|(F2Set a, const F2Set& b) { return a |= b; }
    friend F2Set operator-(F2Set a, const F2Set& b) { return a -= b; }

    std::uint64_t intersection_size(const F2Set& o) const {
        check_same(o);
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < words_.size(); ++j) c += std::popcount(words_[j] & o.words_[j]);
        return c;
    }

    bool is_subset_of(const F2Set& o) const { return intersection_size(o) == size_; }

    friend bool operator==(const F2Set& a, const F2Set& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    void check_point(std::uint32_t v) const {
        require(v < universe(), "point " + std::to_string(v) + " outside F_2^" + std::to_string(n_));
    }

    void check_same(const F2Set& o) const {
        require(n_ == o.n_, "set dimension mismatch: " + std::to_string(n_) + " vs " +
                                std::to_string(o.n_));
    }

    template <class Op>
    F2Set& combine(const F2Set& o, Op op) {
        check_same(o);
        size_ = 0;
        for (std::size_t j = 0; j < words_.size(); ++j) {
            words_[j] = op(words_[j], o.words_[j]);
            size_ += std::popcount(words_[j]);
        }
        return *this;
    }

    int n_;
    std::vector<std::uint64_t> words_;
    std::uint64_t size_ = 0;
};

// Exactly `count` distinct points, chosen by a partial Fisher-Yates shuffle.
inline F2Set random_set_of_size(int n, std::uint64_t count, Rng& rng) {
    check_dim(n);
    const std::uint32_t total = universe_size(n);
    require(count <= total, "random set larger than the universe");
    std::vector<std::uint32_t> perm(total);
    for (std::uint32_t i = 0; i < total; ++i) perm[i] = i;
    F2Set out(n);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto j = i + rng.below(total - i);
        std::swap(perm[i], perm[j]);
        out.insert(perm[i]);
    }
    return out;
}

// round(density * 2^n) points; half-way cases round up.
inline F2Set random_set(int n, const Rational& density, Rng& rng) {
    require(density >= 0 && density <= 1, "density must lie in [0, 1]");
    Rational target = density * Rational(universe_size(n)) + Rational(1, 2);
    return random_set_of_size(n, floor_of(target).convert_to<std::uint64_t>(), rng);
}

} // namespace spreadlab::f2
