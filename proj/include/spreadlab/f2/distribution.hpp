#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "../core/rational.hpp"

namespace spreadlab::f2 {

// Exact distribution: weight(p) = numerators[k] / denominator for support[k].
// Support is strictly ascending; numerators are positive and sum to the denominator.
template <class Point>
class FiniteDistribution {
public:
    FiniteDistribution(std::vector<Point> support, std::vector<std::uint64_t> numerators,
                       std::uint64_t denominator)
        : support_(std::move(support)), numerators_(std::move(numerators)), denominator_(denominator) {
        require(support_.size() == numerators_.size(), "support/weight length mismatch");
        require(denominator_ > 0, "distribution denominator must be positive");
        unsigned __int128 sum = 0;
        for (std::size_t k = 0; k < support_.size(); ++k) {
            require(numerators_[k] > 0, "distribution weights must be positive on the support");
            if (k > 0) require(support_[k - 1] < support_[k], "support must be strictly ascending");
            sum += numerators_[k];
        }
        require(sum == denominator_, "distribution weights do not sum to 1");
    }

    // Drops zero weights and sorts; duplicate points are merged.
    static FiniteDistribution from_weights(std::vector<std::pair<Point, std::uint64_t>> weights) {
        std::sort(weights.begin(), weights.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Point> support;
        std::vector<std::uint64_t> nums;
        std::uint64_t total = 0;
        for (auto& [p, w] : weights) {
            if (w == 0) continue;
            total += w;
            if (!support.empty() && !(support.back() < p)) {
                nums.back() += w;
            } else {
                support.push_back(p);
                nums.push_back(w);
            }
        }
        return FiniteDistribution(std::move(support), std::move(nums), total);
    }

    static FiniteDistribution uniform(std::vector<Point> points) {
        std::sort(points.begin(), points.end());
        std::vector<std::uint64_t> nums(points.size(), 1);
        const auto m = points.size();
        return FiniteDistribution(std::move(points), std::move(nums), m);
    }

    const std::vector<Point>& support() const { return support_; }
    const std::vector<std::uint64_t>& numerators() const { return numerators_; }
    std::uint64_t denominator() const { return denominator_; }
    std::size_t support_size() const { return support_.size(); }

    Rational weight(const Point& p) const {
        auto it = std::lower_bound(support_.begin(), support_.end(), p);
        if (it == support_.end() || p < *it) return 0;
        return Rational(BigInt(numerators_[it - support_.begin()]), BigInt(denominator_));
    }

    Rational weight_at(std::size_t k) const {
        return Rational(BigInt(numerators_[k]), BigInt(denominator_));
    }

private:
    std::vector<Point> support_;
    std::vector<std::uint64_t> numerators_;
    std::uint64_t denominator_;
};

// sum over the union of supports of |P - Q|, computed with numerators over Dp * Dq.
template <class Point>
Rational l1_distance(const FiniteDistribution<Point>& P, const FiniteDistribution<Point>& Q) {
    using u128 = unsigned __int128;
    const u128 dp = P.denominator(), dq = Q.denominator();
    u128 acc = 0;
    std::size_t i = 0, j = 0;
    const auto& sp = P.support();
    const auto& sq = Q.support();
    while (i < sp.size() || j < sq.size()) {
        u128 a = 0, b = 0;
        if (j == sq.size() || (i < sp.size() && sp[i] < sq[j])) {
            a = P.numerators()[i++] * dq;
        } else if (i == sp.size() || sq[j] < sp[i]) {
            b = Q.numerators()[j++] * dp;
        } else {
            a = P.numerators()[i++] * dq;
            b = Q.numerators()[j++] * dp;
        }
        acc += a > b ? a - b : b - a;
    }
    return frac_u128(acc, dp * dq);
}

template <class Point>
Rational l2_norm_sq(const FiniteDistribution<Point>& P) {
    BigInt acc = 0;
    for (auto w : P.numerators()) acc += BigInt(w) * w;
    BigInt d = P.denominator();
    return Rational(acc, d * d);
}

} // namespace spreadlab::f2
