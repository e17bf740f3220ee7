#pragma once

#include <cmath>
#include <cstdint>

#include "../core/rational.hpp"
#include "../f2/distribution.hpp"

namespace spreadlab::info {

// 0 log 0 := 0.
inline double xlog2x(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

inline double binary_entropy(double p) {
    require(p >= 0 && p <= 1, "binary entropy needs p in [0, 1]");
    return -xlog2x(p) - xlog2x(1 - p);
}

struct EntropyGap {
    Rational lhs_exact;  // (p - 1/2)^2
    double lhs;
    double rhs;          // 1 - H(p)
    bool holds() const { return lhs <= rhs; }
};

inline EntropyGap binary_entropy_gap(const Rational& p) {
    require(p >= 0 && p <= 1, "binary entropy needs p in [0, 1]");
    const Rational d = p - Rational(1, 2);
    EntropyGap g;
    g.lhs_exact = d * d;
    g.lhs = to_double(g.lhs_exact);
    g.rhs = 1 - binary_entropy(to_double(p));
    // At p = 1/2 both sides vanish; keep rounding from producing a spurious negative rhs.
    if (g.lhs_exact == 0) g.rhs = std::max(g.rhs, 0.0);
    return g;
}

struct EntropyReport {
    double entropy = 0;        // bits
    std::size_t support_size = 0;
};

template <class Point>
EntropyReport entropy(const f2::FiniteDistribution<Point>& D) {
    EntropyReport r;
    const double den = static_cast<double>(D.denominator());
    for (auto w : D.numerators()) r.entropy -= xlog2x(static_cast<double>(w) / den);
    r.support_size = D.support_size();
    return r;
}

} // namespace spreadlab::info
