#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "../core/error.hpp"
#include "../core/rational.hpp"
#include "../f2/distribution.hpp"

namespace spreadlab::games {

struct Question {
    std::uint32_t x = 0, y = 0, z = 0;
    friend auto operator<=>(const Question&, const Question&) = default;
};

struct Answer {
    std::uint32_t a = 0, b = 0, c = 0;
    friend auto operator<=>(const Answer&, const Answer&) = default;
};

using Sizes = std::array<std::uint32_t, 3>;

// A 3-player game: question and answer alphabets are {0, ..., size - 1} per player.
class Game {
public:
    // predicate[question_index(q) * answer_count() + answer_index(a)] is 1 iff (q, a) wins.
    Game(Sizes questions, Sizes answers, f2::FiniteDistribution<Question> query, std::vector<std::uint8_t> predicate)
        : questions_(questions), answers_(answers), query_(std::move(query)), predicate_(std::move(predicate)) {
        for (int p = 0; p < 3; ++p)
            require(questions_[p] > 0 && answers_[p] > 0, "game alphabets must be nonempty");
        require(predicate_.size() == question_count() * answer_count(),
                "predicate must cover every (question, answer) combination");
        for (const auto& q : query_.support())
            require(q.x < questions_[0] && q.y < questions_[1] && q.z < questions_[2],
                    "query support outside the question alphabets");
    }

    const Sizes& question_sizes() const { return questions_; }
    const Sizes& answer_sizes() const { return answers_; }
    const f2::FiniteDistribution<Question>& query() const { return query_; }

    std::uint64_t question_count() const {
        return std::uint64_t{questions_[0]} * questions_[1] * questions_[2];
    }
    std::uint64_t answer_count() const { return std::uint64_t{answers_[0]} * answers_[1] * answers_[2]; }
    std::uint64_t question_index(const Question& q) const {
        return (std::uint64_t{q.x} * questions_[1] + q.y) * questions_[2] + q.z;
    }
    std::uint64_t answer_index(const Answer& a) const {
        return (std::uint64_t{a.a} * answers_[1] + a.b) * answers_[2] + a.c;
    }

    bool wins(const Question& q, const Answer& a) const {
        return predicate_[question_index(q) * answer_count() + answer_index(a)] != 0;
    }

    const std::vector<std::uint8_t>& predicate() const { return predicate_; }

private:
    Sizes questions_;
    Sizes answers_;
    f2::FiniteDistribution<Question> query_;
    std::vector<std::uint8_t> predicate_;
};

template <class Pred>
Game game_from_predicate(Sizes questions, Sizes answers, f2::FiniteDistribution<Question> query, Pred pred) {
    std::vector<std::uint8_t> table;
    table.reserve(std::uint64_t{questions[0]} * questions[1] * questions[2] * answers[0] * answers[1] * answers[2]);
    for (std::uint32_t x = 0; x < questions[0]; ++x)
        for (std::uint32_t y = 0; y < questions[1]; ++y)
            for (std::uint32_t z = 0; z < questions[2]; ++z)
                for (std::uint32_t a = 0; a < answers[0]; ++a)
                    for (std::uint32_t b = 0; b < answers[1]; ++b)
                        for (std::uint32_t c = 0; c < answers[2]; ++c)
                            table.push_back(pred(Question{x, y, z}, Answer{a, b, c}) ? 1 : 0);
    return Game(questions, answers, std::move(query), std::move(table));
}

// Uniform questions over x + y + z = 0; win iff a + b + c = x OR y OR z (mod 2).
inline Game make_ghz_game() {
    auto query = f2::FiniteDistribution<Question>::uniform({{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    return game_from_predicate({2, 2, 2}, {2, 2, 2}, std::move(query), [](const Question& q, const Answer& a) {
        return ((a.a ^ a.b ^ a.c) & 1u) == (q.x | q.y | q.z);
    });
}

inline constexpr std::uint64_t kDefaultRepetitionCells = std::uint64_t{1} << 26;

// G^{(x) n} as an explicit game. A repeated question or answer is a base-size digit string
// whose i-th digit (least significant first) is coordinate i.
inline Game explicit_repetition(const Game& G, int n, std::uint64_t max_cells = kDefaultRepetitionCells) {
    require(n >= 1, "repetition count must be at least 1");
    Sizes qs{1, 1, 1}, as{1, 1, 1};
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < 3; ++p) {
            qs[p] *= G.question_sizes()[p];
            as[p] *= G.answer_sizes()[p];
        }
    const long double cells = static_cast<long double>(qs[0]) * qs[1] * qs[2] * as[0] * as[1] * as[2];
    if (cells > static_cast<long double>(max_cells))
        throw BudgetError("explicit repetition needs " + std::to_string(static_cast<double>(cells)) +
                          " predicate cells, above the budget");

    // Product query: every n-tuple of base support points.
    const auto& base = G.query();
    const std::size_t k = base.support_size();
    std::uint64_t den = 1;
    for (int i = 0; i < n; ++i) {
        require(den <= UINT64_MAX / base.denominator(), "repeated query denominator overflows 64 bits");
        den *= base.denominator();
    }
    std::vector<std::pair<Question, std::uint64_t>> weights;
    std::vector<std::size_t> digit(n, 0);
    while (true) {
        Question q{0, 0, 0};
        std::uint64_t w = 1;
        std::uint32_t px = 1, py = 1, pz = 1;
        for (int i = 0; i < n; ++i) {
            const auto& b = base.support()[digit[i]];
            q.x += b.x * px;
            q.y += b.y * py;
            q.z += b.z * pz;
            px *= G.question_sizes()[0];
            py *= G.question_sizes()[1];
            pz *= G.question_sizes()[2];
            w *= base.numerators()[digit[i]];
        }
        weights.push_back({q, w});
        int i = 0;
        while (i < n && ++digit[i] == k) digit[i++] = 0;
        if (i == n) break;
    }
    std::sort(weights.begin(), weights.end());
    std::vector<Question> support;
    std::vector<std::uint64_t> nums;
    for (auto& [q, w] : weights) {
        support.push_back(q);
        nums.push_back(w);
    }
    f2::FiniteDistribution<Question> query(std::move(support), std::move(nums), den);

    auto digit_of = [](std::uint32_t v, std::uint32_t base_size, int i) {
        for (int j = 0; j < i; ++j) v /= base_size;
        return v % base_size;
    };
    return game_from_predicate(qs, as, std::move(query), [&](const Question& q, const Answer& a) {
        for (int i = 0; i < n; ++i) {
            Question qi{digit_of(q.x, G.question_sizes()[0], i), digit_of(q.y, G.question_sizes()[1], i),
                        digit_of(q.z, G.question_sizes()[2], i)};
            Answer ai{digit_of(a.a, G.answer_sizes()[0], i), digit_of(a.b, G.answer_sizes()[1], i),
                      digit_of(a.c, G.answer_sizes()[2], i)};
            if (!G.wins(qi, ai)) return false;
        }
        return true;
    });
}

// JSON: {alphabets: {questions: [|X|,|Y|,|Z|], answers: [|A|,|B|,|C|]},
//        query: [{x,y,z,weight_num,weight_den}], predicate: [{x,y,z,a,b,c,win}]}.
// Every (question, answer) combination must appear in the predicate exactly once.
inline nlohmann::json game_to_json(const Game& G) {
    using nlohmann::json;
    json j;
    j["alphabets"] = {{"questions", G.question_sizes()}, {"answers", G.answer_sizes()}};
    json query = json::array();
    for (std::size_t k = 0; k < G.query().support_size(); ++k) {
        const auto& q = G.query().support()[k];
        const Rational w = G.query().weight_at(k);
        query.push_back({{"x", q.x}, {"y", q.y}, {"z", q.z},
                         {"weight_num", numerator(w).convert_to<std::uint64_t>()},
                         {"weight_den", denominator(w).convert_to<std::uint64_t>()}});
    }
    j["query"] = query;
    json pred = json::array();
    const auto& qs = G.question_sizes();
    const auto& as = G.answer_sizes();
    for (std::uint32_t x = 0; x < qs[0]; ++x)
        for (std::uint32_t y = 0; y < qs[1]; ++y)
            for (std::uint32_t z = 0; z < qs[2]; ++z)
                for (std::uint32_t a = 0; a < as[0]; ++a)
                    for (std::uint32_t b = 0; b < as[1]; ++b)
                        for (std::uint32_t c = 0; c < as[2]; ++c)
                            pred.push_back({{"x", x}, {"y", y}, {"z", z}, {"a", a}, {"b", b}, {"c", c},
                                            {"win", G.wins({x, y, z}, {a, b, c})}});
    j["predicate"] = pred;
    return j;
}

inline Game game_from_json(const nlohmann::json& j) {
    try {
        Sizes qs, as;
        for (int p = 0; p < 3; ++p) {
            qs[p] = j.at("alphabets").at("questions").at(p).get<std::uint32_t>();
            as[p] = j.at("alphabets").at("answers").at(p).get<std::uint32_t>();
            require(qs[p] > 0 && as[p] > 0, "game alphabets must be nonempty");
        }
        if (j.at("alphabets").at("questions").size() != 3 || j.at("alphabets").at("answers").size() != 3)
            throw InputError("game alphabets must list exactly three sizes");
        std::vector<std::pair<Question, Rational>> raw;
        BigInt lcm = 1;
        for (const auto& e : j.at("query")) {
            Question q{e.at("x").get<std::uint32_t>(), e.at("y").get<std::uint32_t>(), e.at("z").get<std::uint32_t>()};
            const auto num = e.at("weight_num").get<std::uint64_t>();
            const auto den = e.at("weight_den").get<std::uint64_t>();
            require(den > 0, "query weight denominator must be positive");
            if (num == 0) continue;
            Rational w{BigInt(num), BigInt(den)};
            lcm = boost::multiprecision::lcm(lcm, denominator(w));
            raw.push_back({q, w});
        }
        require(!raw.empty(), "query must have positive weight somewhere");
        require(lcm <= BigInt(UINT64_MAX), "query weight denominators are too large");
        std::vector<std::pair<Question, std::uint64_t>> weights;
        for (auto& [q, w] : raw)
            weights.push_back({q, (numerator(w) * (lcm / denominator(w))).convert_to<std::uint64_t>()});
        auto query = f2::FiniteDistribution<Question>::from_weights(std::move(weights));
        require(query.denominator() == lcm.convert_to<std::uint64_t>(), "query weights do not sum to 1");

        const std::uint64_t qn = std::uint64_t{qs[0]} * qs[1] * qs[2];
        const std::uint64_t an = std::uint64_t{as[0]} * as[1] * as[2];
        std::vector<std::uint8_t> table(qn * an, 0);
        std::vector<std::uint8_t> seen(qn * an, 0);
        for (const auto& e : j.at("predicate")) {
            Question q{e.at("x").get<std::uint32_t>(), e.at("y").get<std::uint32_t>(), e.at("z").get<std::uint32_t>()};
            Answer a{e.at("a").get<std::uint32_t>(), e.at("b").get<std::uint32_t>(), e.at("c").get<std::uint32_t>()};
            require(q.x < qs[0] && q.y < qs[1] && q.z < qs[2], "predicate question outside the alphabet");
            require(a.a < as[0] && a.b < as[1] && a.c < as[2], "predicate answer outside the alphabet");
            const std::uint64_t idx = ((std::uint64_t{q.x} * qs[1] + q.y) * qs[2] + q.z) * an +
                                      (std::uint64_t{a.a} * as[1] + a.b) * as[2] + a.c;
            require(!seen[idx], "predicate lists a (question, answer) combination twice");
            seen[idx] = 1;
            const auto& win = e.at("win");
            table[idx] = win.is_boolean() ? win.get<bool>() : win.get<int>() != 0;
        }
        for (auto s : seen) require(s, "predicate must cover every (question, answer) combination");
        return Game(qs, as, std::move(query), std::move(table));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed game description: ") + e.what());
    }
}

} // namespace spreadlab::games
