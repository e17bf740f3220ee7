#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "../core/rational.hpp"

namespace spreadlab::spread {

enum class Coverage { exact, sampled };

inline const char* to_string(Coverage c) { return c == Coverage::exact ? "exact" : "sampled"; }

struct SpreadMode {
    enum class Kind { exact, sampled };
    Kind kind = Kind::exact;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    static SpreadMode exact() { return {}; }
    static SpreadMode sampled(std::uint64_t samples, std::uint64_t seed) {
        return {Kind::sampled, samples, seed};
    }
    bool is_exact() const { return kind == Kind::exact; }
};

inline constexpr std::uint64_t kDefaultSpreadBudget = std::uint64_t{1} << 32;

struct SpreadParams {
    int r = 0;
    Rational epsilon = Rational(1, 4);
    SpreadMode mode = SpreadMode::exact();
    std::uint64_t budget = kDefaultSpreadBudget;

    void validate() const {
        require(r >= 0, "spreadness codimension budget r must be >= 0");
        require(epsilon > 0 && epsilon < 1, "spreadness epsilon must lie in (0, 1)");
        require(mode.is_exact() || mode.samples > 0, "sampled mode needs a positive sample count");
    }
};

// If passed and coverage is exact, no examined object violates the defining inequality;
// if failed, `witness` violates it.
template <class Witness>
struct SpreadVerdict {
    bool passed = true;
    std::optional<Witness> witness;
    Rational observed_ratio = 1;
    Coverage coverage = Coverage::exact;
};

} // namespace spreadlab::spread
