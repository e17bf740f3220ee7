#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "../core/rational.hpp"

namespace spreadlab::info {

struct ChernoffBounds {
    double lower = 1;  // Pr[Z <= (1 - delta) mu n] <= exp(-delta^2 mu n / 2)
    double upper = 1;  // Pr[Z >= (1 + delta) mu n] <= exp(-delta^2 mu n / 3)
};

inline ChernoffBounds chernoff_reference(std::uint64_t n, double mu, double delta) {
    require(n >= 1, "Chernoff reference needs n >= 1");
    require(delta > 0 && delta < 1, "Chernoff reference needs delta in (0, 1)");
    require(mu > 0 && mu <= 1, "Chernoff reference needs mu in (0, 1]");
    const double e = delta * delta * mu * static_cast<double>(n);
    return {std::exp(-e / 2), std::exp(-e / 3)};
}

// ||U_[n] - U_{[n] minus a t-subset}||_1 = 2t / n.
inline Rational uniform_prefix_distance(std::uint64_t n, std::uint64_t t) {
    require(t < n, "uniform prefix distance needs t < n");
    return Rational(BigInt(2 * t), BigInt(n));
}

struct Interval {
    double low = 0;
    double high = 1;
};

// Wilson score interval for k successes in m trials at normal quantile z.
inline Interval wilson_interval(std::uint64_t k, std::uint64_t m, double z = 1.959963984540054) {
    require(m > 0 && k <= m, "Wilson interval needs 0 <= k <= m, m > 0");
    const double mm = static_cast<double>(m);
    const double p = static_cast<double>(k) / mm;
    const double z2 = z * z;
    const double denom = 1 + z2 / mm;
    const double centre = (p + z2 / (2 * mm)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / mm + z2 / (4 * mm * mm)) / denom;
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == m ? 1.0 : std::min(1.0, centre + half)};
}

} // namespace spreadlab::info
