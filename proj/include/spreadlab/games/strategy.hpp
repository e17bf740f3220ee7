#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "../core/bits.hpp"
#include "../core/error.hpp"
#include "../core/rng.hpp"
#include "value.hpp"

namespace spreadlab::games {

// Deterministic strategy for a repeated binary game: player p maps an n-bit question to an
// n-bit answer.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual int n() const = 0;
    virtual std::uint64_t answer(int player, std::uint64_t question) const = 0;
    virtual std::string name() const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

inline constexpr int kMaxTableDim = 20;

class TableStrategy final : public Strategy {
public:
    TableStrategy(int n, std::array<std::vector<std::uint64_t>, 3> tables, std::string name = "table")
        : n_(n), tables_(std::move(tables)), name_(std::move(name)) {
        require(n >= 1 && n <= kMaxTableDim, "table strategies need 1 <= n <= " + std::to_string(kMaxTableDim));
        for (auto& t : tables_) {
            require(t.size() == (std::size_t{1} << n), "strategy table must cover every question");
            for (auto v : t) require((v & ~low_mask(n)) == 0, "strategy answer wider than n bits");
        }
    }

    int n() const override { return n_; }
    std::uint64_t answer(int player, std::uint64_t q) const override { return tables_[player][q]; }
    std::string name() const override { return name_; }

    const std::vector<std::uint64_t>& table(int player) const { return tables_[player]; }
    std::vector<std::uint64_t>& table(int player) { return tables_[player]; }

private:
    int n_;
    std::array<std::vector<std::uint64_t>, 3> tables_;
    std::string name_;
};

// The same single-round strategy on every coordinate.
class ProductStrategy final : public Strategy {
public:
    ProductStrategy(int n, const StrategyTables& base, std::string name = "product")
        : n_(n), name_(std::move(name)) {
        require(n >= 1 && n <= 64, "strategies need 1 <= n <= 64");
        const std::vector<std::uint32_t>* t[3] = {&base.f, &base.g, &base.h};
        for (int p = 0; p < 3; ++p) {
            require(t[p]->size() == 2, "product strategies need a binary base strategy");
            on_zero_[p] = (*t[p])[0] ? low_mask(n) : 0;
            on_one_[p] = (*t[p])[1] ? low_mask(n) : 0;
        }
    }

    int n() const override { return n_; }
    std::uint64_t answer(int player, std::uint64_t q) const override {
        return ((q & on_one_[player]) | (~q & on_zero_[player])) & low_mask(n_);
    }
    std::string name() const override { return name_; }

private:
    int n_;
    std::uint64_t on_zero_[3], on_one_[3];
    std::string name_;
};

class ConstantStrategy final : public Strategy {
public:
    ConstantStrategy(int n, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::string name = "constant")
        : n_(n), answers_{a & low_mask(n), b & low_mask(n), c & low_mask(n)}, name_(std::move(name)) {
        require(n >= 1 && n <= 64, "strategies need 1 <= n <= 64");
    }

    int n() const override { return n_; }
    std::uint64_t answer(int player, std::uint64_t) const override { return answers_[player]; }
    std::string name() const override { return name_; }

private:
    int n_;
    std::uint64_t answers_[3];
    std::string name_;
};

// Pseudo-random table: every (player, question) gets an independent-looking uniform answer.
class HashStrategy final : public Strategy {
public:
    HashStrategy(int n, std::uint64_t seed) : n_(n), seed_(seed) {
        require(n >= 1 && n <= 64, "strategies need 1 <= n <= 64");
        for (int p = 0; p < 3; ++p) keys_[p] = derive_seed(seed, static_cast<std::uint64_t>(p));
    }

    int n() const override { return n_; }
    std::uint64_t answer(int player, std::uint64_t q) const override {
        return splitmix64(keys_[player] ^ splitmix64(q)) & low_mask(n_);
    }
    std::string name() const override { return "random-" + std::to_string(seed_); }

private:
    int n_;
    std::uint64_t seed_;
    std::uint64_t keys_[3];
};

// Coordinates split into consecutive blocks of width block.n(); each full block is played
// with `block`, the remaining low-width tail with `tail`.
class BlockStrategy final : public Strategy {
public:
    BlockStrategy(int n, std::shared_ptr<const TableStrategy> block, StrategyPtr tail, std::string name = "block")
        : n_(n), block_(std::move(block)), tail_(std::move(tail)), name_(std::move(name)) {
        require(n >= 1 && n <= 64, "strategies need 1 <= n <= 64");
        const int k = block_->n();
        blocks_ = n / k;
        const int rest = n - blocks_ * k;
        require(rest == 0 || (tail_ && tail_->n() == rest), "block strategy tail width mismatch");
    }

    int n() const override { return n_; }
    std::uint64_t answer(int player, std::uint64_t q) const override {
        const int k = block_->n();
        std::uint64_t out = 0;
        for (int j = 0; j < blocks_; ++j)
            out |= block_->answer(player, (q >> (j * k)) & low_mask(k)) << (j * k);
        if (blocks_ * k < n_) out |= tail_->answer(player, q >> (blocks_ * k)) << (blocks_ * k);
        return out;
    }
    std::string name() const override { return name_; }

private:
    int n_;
    std::shared_ptr<const TableStrategy> block_;
    StrategyPtr tail_;
    int blocks_ = 0;
    std::string name_;
};

inline TableStrategy tabulate(const Strategy& s) {
    require(s.n() <= kMaxTableDim, "tabulation needs n <= " + std::to_string(kMaxTableDim));
    std::array<std::vector<std::uint64_t>, 3> t;
    const std::uint64_t N = std::uint64_t{1} << s.n();
    for (int p = 0; p < 3; ++p) {
        t[p].resize(N);
        for (std::uint64_t q = 0; q < N; ++q) t[p][q] = s.answer(p, q);
    }
    return TableStrategy(s.n(), std::move(t), s.name());
}

} // namespace spreadlab::games
