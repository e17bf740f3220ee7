#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "repeated.hpp"
#include "strategy.hpp"
#include "value.hpp"

namespace spreadlab::games {

inline std::shared_ptr<const ProductStrategy> product_optimal_strategy(const RepeatedGame& G) {
    return std::make_shared<ProductStrategy>(G.n(), game_value_bruteforce(G.base()).witness, "product-optimal");
}

struct LocalSearchOptions {
    int moves = 200;
    double noise = 0.25;  // fraction of start-table entries replaced by uniform answers
};

// Hill climb on the probability of winning every coordinate. Start: the product-optimal
// tables with noise; each move picks a player and a question and switches that answer to
// the one agreeing with the most inputs (ties keep the current answer, then the smallest).
inline TableStrategy local_search_strategy(const RepeatedGame& G, std::uint64_t seed,
                                           const LocalSearchOptions& opt = {}) {
    require(G.answers_determined(), "local search needs an answer-determined game");
    const int n = G.n();
    require(n <= 12, "local search tables need n <= 12");
    const std::uint64_t N = std::uint64_t{1} << n;
    Rng rng(seed);
    TableStrategy t = tabulate(*product_optimal_strategy(G));
    for (int p = 0; p < 3; ++p)
        for (auto& v : t.table(p))
            if (rng.bernoulli(opt.noise)) v = rng.below(N);
    std::vector<std::uint32_t> votes(N, 0);
    std::vector<std::uint64_t> touched;
    for (int move = 0; move < opt.moves; ++move) {
        const int p = static_cast<int>(rng.below(3));
        const std::uint64_t q = rng.below(N);
        touched.clear();
        for (std::uint64_t other = 0; other < N; ++other) {
            std::uint64_t x, y, z;
            if (p == 0) {
                x = q, y = other;
            } else if (p == 1) {
                x = other, y = q;
            } else {
                x = other, y = q ^ other;
            }
            z = x ^ y;
            const std::uint64_t a = t.table(0)[x], b = t.table(1)[y], c = t.table(2)[z];
            const std::uint64_t need = p == 0   ? G.required_answer(0, x, y, z, b, c)
                                       : p == 1 ? G.required_answer(1, x, y, z, a, c)
                                                : G.required_answer(2, x, y, z, a, b);
            if (votes[need]++ == 0) touched.push_back(need);
        }
        std::uint64_t& cur = t.table(p)[q];
        std::uint64_t best = cur;
        for (auto v : touched)
            if (votes[v] > votes[best] || (votes[v] == votes[best] && best != cur && v < best))
                best = v;
        cur = best;
        for (auto v : touched) votes[v] = 0;
    }
    return TableStrategy(n, {t.table(0), t.table(1), t.table(2)}, "local-" + std::to_string(seed));
}

struct BatteryConfig {
    bool product_optimal = true;
    int random = 32;
    int local = 16;
    bool constant = true;
    int block_width = 4;  // local-search block width once n > 12
};

inline BatteryConfig battery_of_size(int total) {
    BatteryConfig c;
    require(total >= 2 + c.local, "battery needs room for the fixed members");
    c.random = total - 2 - c.local;
    return c;
}

// Members in order: product-optimal, random, local search, constant; member k draws from
// derive_seed(seed, k). Beyond n = 12 local search runs on block_width coordinates and the
// block is repeated, with product-optimal play on leftover coordinates.
inline std::vector<StrategyPtr> make_battery(const RepeatedGame& G, const BatteryConfig& cfg, std::uint64_t seed) {
    std::vector<StrategyPtr> out;
    std::uint64_t k = 0;
    if (cfg.product_optimal) out.push_back(product_optimal_strategy(G));
    ++k;
    for (int j = 0; j < cfg.random; ++j) out.push_back(std::make_shared<HashStrategy>(G.n(), derive_seed(seed, k++)));
    for (int j = 0; j < cfg.local; ++j) {
        const std::uint64_t s = derive_seed(seed, k++);
        if (G.n() <= 12) {
            out.push_back(std::make_shared<TableStrategy>(local_search_strategy(G, s)));
            continue;
        }
        const int width = std::min(cfg.block_width, G.n());
        RepeatedGame block_game(G.base(), width);
        auto block = std::make_shared<TableStrategy>(local_search_strategy(block_game, s));
        StrategyPtr tail;
        if (G.n() % width) tail = product_optimal_strategy(RepeatedGame(G.base(), G.n() % width));
        out.push_back(std::make_shared<BlockStrategy>(G.n(), block, tail, "local-block-" + std::to_string(s)));
    }
    if (cfg.constant) out.push_back(std::make_shared<ConstantStrategy>(G.n(), 0, 0, 0, "constant-zero"));
    return out;
}

} // namespace spreadlab::games
