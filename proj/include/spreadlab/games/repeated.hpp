#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "../core/bits.hpp"
#include "game.hpp"

namespace spreadlab::games {

// G^{(x) n} for a binary base game with uniform questions on {x + y + z = 0}. Questions and
// answers are n-bit words, bit i being coordinate i; every input has z = x ^ y.
class RepeatedGame {
public:
    RepeatedGame(Game base, int n) : base_(std::move(base)), n_(n) {
        require(n >= 1 && n <= 64, "repetition count must lie in [1, 64]");
        for (int p = 0; p < 3; ++p)
            require(base_.question_sizes()[p] == 2 && base_.answer_sizes()[p] == 2,
                    "repeated games need binary question and answer alphabets");
        const auto& Q = base_.query();
        require(Q.support_size() == 4, "repeated games need the query uniform on the even-parity triples");
        for (std::size_t s = 0; s < 4; ++s) {
            const auto& q = Q.support()[s];
            require(((q.x ^ q.y ^ q.z) & 1u) == 0 && Q.numerators()[s] * 4 == Q.denominator(),
                    "repeated games need the query uniform on the even-parity triples");
            support_[s] = q;
            for (std::uint32_t j = 0; j < 8; ++j)
                if (base_.wins(q, {j >> 2, (j >> 1) & 1u, j & 1u})) winning_[s].push_back(j);
        }
        determined_ = true;
        for (std::size_t s = 0; s < 4; ++s)
            for (int p = 0; p < 3; ++p)
                for (std::uint32_t others = 0; others < 4; ++others) {
                    int hits = 0;
                    for (std::uint32_t v = 0; v < 2; ++v) hits += base_.wins(support_[s], answer_with(p, v, others));
                    if (hits != 1) determined_ = false;
                }
    }

    const Game& base() const { return base_; }
    int n() const { return n_; }
    std::uint64_t mask() const { return low_mask(n_); }

    // Bit i set iff coordinate i is won.
    std::uint64_t win_mask(std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) const {
        std::uint64_t won = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            const std::uint64_t qm = lit(x, support_[s].x) & lit(y, support_[s].y) & lit(z, support_[s].z);
            if (!qm) continue;
            std::uint64_t am = 0;
            for (auto j : winning_[s]) am |= lit(a, j >> 2) & lit(b, (j >> 1) & 1u) & lit(c, j & 1u);
            won |= qm & am;
        }
        return won & mask();
    }

    // Every coordinate's winning answer for one player is unique given the other two answers.
    bool answers_determined() const { return determined_; }

    // The unique answer of `player` winning every coordinate, given the question triple and
    // the other two players' answers in player order. Needs answers_determined().
    std::uint64_t required_answer(int player, std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t u,
                                  std::uint64_t v) const {
        require(determined_, "required answers exist only for answer-determined games");
        std::uint64_t out = 0;
        for (std::size_t s = 0; s < 4; ++s) {
            const std::uint64_t qm = lit(x, support_[s].x) & lit(y, support_[s].y) & lit(z, support_[s].z);
            if (!qm) continue;
            for (auto j : winning_[s]) {
                const std::uint32_t bits[3] = {j >> 2, (j >> 1) & 1u, j & 1u};
                if (!bits[player]) continue;
                const int o1 = player == 0 ? 1 : 0;
                const int o2 = player == 2 ? 1 : 2;
                out |= qm & lit(u, bits[o1]) & lit(v, bits[o2]);
            }
        }
        return out & mask();
    }

private:
    static std::uint64_t lit(std::uint64_t v, std::uint32_t bit) { return bit ? v : ~v; }

    // Answer triple with `player` answering v and the others reading bits of `others` in order.
    static Answer answer_with(int player, std::uint32_t v, std::uint32_t others) {
        std::uint32_t bits[3];
        bits[player] = v;
        int k = 1;
        for (int p = 0; p < 3; ++p)
            if (p != player) bits[p] = (others >> k--) & 1u;
        return {bits[0], bits[1], bits[2]};
    }

    Game base_;
    int n_;
    std::array<Question, 4> support_{};
    std::array<std::vector<std::uint32_t>, 4> winning_;
    bool determined_ = false;
};

} // namespace spreadlab::games
