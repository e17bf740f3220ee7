#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "../core/rational.hpp"
#include "../f2/distribution.hpp"
#include "diagonal_product.hpp"

namespace spreadlab::diag {

using f2::FiniteDistribution;

inline constexpr std::uint64_t kDefaultMaxSquareWork = std::uint64_t{1} << 36;

struct SquareProfileOptions {
    bool per_coordinate = false;
    bool weight_histogram = false;
    std::uint64_t max_work = kDefaultMaxSquareWork;
};

namespace detail {

// For (x, y) in S the admissible w form (X+x) ∩ (Y+y) ∩ (Z+x+y); translates are cached
// densely so each pair costs a word-parallel three-way AND.
class FiberScanner {
public:
    explicit FiberScanner(const DiagonalProduct& S) : S_(S), stride_(S.stride()) {
        const std::size_t total = std::size_t{1} << S.ambient_dim();
        ys_.assign(total * stride_, 0);
        zs_.assign(total * stride_, 0);
        auto fill = [&](const F2Set& A, std::vector<std::uint64_t>& dst) {
            A.for_each([&](std::uint32_t a) {
                F2Set t = A.translated(a);
                std::copy(t.words().begin(), t.words().end(), dst.begin() + a * stride_);
            });
        };
        fill(S.Y(), ys_);
        fill(S.Z(), zs_);
        xs_.assign(stride_, 0);
    }

    // Must be called before fiber() for pairs with this x.
    void set_x(std::uint32_t x) {
        F2Set t = S_.X().translated(x);
        std::copy(t.words().begin(), t.words().end(), xs_.begin());
        x_ = x;
    }

    void fiber(std::uint32_t y, std::uint64_t* out) const {
        const std::uint64_t* yw = ys_.data() + y * stride_;
        const std::uint64_t* zw = zs_.data() + (x_ ^ y) * stride_;
        for (std::size_t k = 0; k < stride_; ++k) out[k] = xs_[k] & yw[k] & zw[k];
    }

    std::size_t stride() const { return stride_; }

private:
    const DiagonalProduct& S_;
    std::size_t stride_;
    std::vector<std::uint64_t> xs_, ys_, zs_;
    std::uint32_t x_ = 0;
};

// masks[i] = {w : w_i = 1} when by_class is false, {w : |w| = i} otherwise.
inline std::vector<std::vector<std::uint64_t>> coordinate_masks(int n, bool by_class) {
    const std::size_t stride = F2Set::word_count(n);
    std::vector<std::vector<std::uint64_t>> masks(by_class ? n + 1 : n,
                                                  std::vector<std::uint64_t>(stride, 0));
    for (std::uint32_t w = 0; w < (std::uint32_t{1} << n); ++w) {
        if (by_class) {
            masks[std::popcount(w)][w >> 6] |= std::uint64_t{1} << (w & 63);
        } else {
            for (int i = 0; i < n; ++i)
                if ((w >> i) & 1u) masks[i][w >> 6] |= std::uint64_t{1} << (w & 63);
        }
    }
    return masks;
}

inline std::uint64_t masked_count(const std::uint64_t* a, const std::vector<std::uint64_t>& m) {
    std::uint64_t c = 0;
    for (std::size_t k = 0; k < m.size(); ++k) c += std::popcount(a[k] & m[k]);
    return c;
}

} // namespace detail

// Per-pair square counts cnt(x,y) = |{w : s_{x,y,w} ⊆ S}| = 2^n Γ(x,y), over pairs of S in order.
class SquareProfile {
public:
    SquareProfile(const DiagonalProduct& S, const SquareProfileOptions& opt = {}) : n_(S.ambient_dim()) {
        const std::uint64_t work = S.size() * S.stride() * (1 + (opt.per_coordinate ? n_ : 0));
        if (work > opt.max_work)
            throw BudgetError("square scan needs " + std::to_string(work) +
                              " word operations, over the budget of " + std::to_string(opt.max_work));
        pairs_.reserve(S.size());
        counts_.reserve(S.size());
        per_coordinate_ = opt.per_coordinate;
        if (opt.per_coordinate) {
            coord_counts_.reserve(S.size() * n_);
            coord_totals_.assign(n_, 0);
        }
        if (opt.weight_histogram) weight_hist_.assign(n_ + 1, 0);
        const auto coord_masks = opt.per_coordinate ? detail::coordinate_masks(n_, false)
                                                    : std::vector<std::vector<std::uint64_t>>{};
        const auto class_masks = opt.weight_histogram ? detail::coordinate_masks(n_, true)
                                                      : std::vector<std::vector<std::uint64_t>>{};
        detail::FiberScanner scan(S);
        std::vector<std::uint64_t> fib(scan.stride());
        std::uint32_t current_x = ~0u;
        S.for_each([&](std::uint32_t x, std::uint32_t y) {
            if (x != current_x) {
                scan.set_x(x);
                current_x = x;
            }
            scan.fiber(y, fib.data());
            std::uint64_t c = 0;
            for (auto w : fib) c += std::popcount(w);
            pairs_.push_back({x, y});
            counts_.push_back(static_cast<std::uint32_t>(c));
            total_ += c;
            sum_sq_ += static_cast<unsigned __int128>(c) * c;
            for (int i = 0; i < static_cast<int>(coord_masks.size()); ++i) {
                auto ci = detail::masked_count(fib.data(), coord_masks[i]);
                coord_counts_.push_back(static_cast<std::uint32_t>(ci));
                coord_totals_[i] += ci;
            }
            for (std::size_t k = 0; k < class_masks.size(); ++k)
                weight_hist_[k] += detail::masked_count(fib.data(), class_masks[k]);
        });
        diag_size_ = S.size();
    }

    int ambient_dim() const { return n_; }
    const std::vector<Pair>& pairs() const { return pairs_; }
    const std::vector<std::uint32_t>& counts() const { return counts_; }
    // |𝒯|, counting all representations.
    std::uint64_t triple_count() const { return total_; }
    std::uint64_t diagonal_size() const { return diag_size_; }
    bool has_per_coordinate() const { return per_coordinate_; }
    bool has_weight_histogram() const { return !weight_hist_.empty(); }
    std::uint32_t coordinate_count(std::size_t pair_index, int i) const {
        return coord_counts_[pair_index * n_ + i];
    }
    // |{(x,y,w) in 𝒯 : w_i = 1}|.
    const std::vector<std::uint64_t>& coordinate_totals() const { return coord_totals_; }
    // Triples in 𝒯 by Hamming weight of w.
    const std::vector<std::uint64_t>& weight_histogram() const { return weight_hist_; }

    Rational gamma(std::uint32_t x, std::uint32_t y) const {
        auto it = std::lower_bound(pairs_.begin(), pairs_.end(), Pair{x, y});
        if (it == pairs_.end() || *it != Pair{x, y}) return 0;
        return Rational(BigInt(counts_[it - pairs_.begin()]), BigInt(1) << n_);
    }

    // ||Γ||_1 = |𝒯| 2^{-3n} (average over all 2^{2n} pairs).
    Rational gamma_l1() const { return Rational(BigInt(total_), BigInt(1) << (3 * n_)); }

    // ||Γ||_2^2 = sum cnt^2 / 2^{4n}.
    Rational gamma_l2sq() const { return frac_u128(sum_sq_, 1) / Rational(BigInt(1) << (4 * n_)); }

    unsigned __int128 sum_of_squares() const { return sum_sq_; }

private:
    int n_;
    std::vector<Pair> pairs_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> coord_counts_;
    std::vector<std::uint64_t> coord_totals_;
    std::vector<std::uint64_t> weight_hist_;
    std::uint64_t total_ = 0;
    std::uint64_t diag_size_ = 0;
    bool per_coordinate_ = false;
    unsigned __int128 sum_sq_ = 0;
};

struct Triple {
    std::uint32_t x = 0, y = 0, w = 0;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// 𝒯 = {(x,y,w) : s_{x,y,w} ⊆ S}, every representation included. Iterated lazily.
class SquareSet {
public:
    explicit SquareSet(DiagonalProduct S, std::uint64_t max_work = kDefaultMaxSquareWork)
        : S_(std::move(S)), max_work_(max_work) {
        SquareProfileOptions opt;
        opt.max_work = max_work;
        count_ = SquareProfile(S_, opt).triple_count();
    }

    const DiagonalProduct& diagonal_product() const { return S_; }
    std::uint64_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    // Ascending in (x, y, w).
    template <class F>
    void for_each(F&& f) const {
        detail::FiberScanner scan(S_);
        std::vector<std::uint64_t> fib(scan.stride());
        std::uint32_t current_x = ~0u;
        S_.for_each([&](std::uint32_t x, std::uint32_t y) {
            if (x != current_x) {
                scan.set_x(x);
                current_x = x;
            }
            scan.fiber(y, fib.data());
            for (std::size_t j = 0; j < fib.size(); ++j) {
                std::uint64_t w = fib[j];
                while (w) {
                    f(Triple{x, y, static_cast<std::uint32_t>((j << 6) | std::countr_zero(w))});
                    w &= w - 1;
                }
            }
        });
    }

    std::vector<Triple> materialize(std::uint64_t max_triples = std::uint64_t{1} << 26) const {
        if (count_ > max_triples)
            throw BudgetError("materializing " + std::to_string(count_) +
                              " squares exceeds the budget of " + std::to_string(max_triples));
        std::vector<Triple> out;
        out.reserve(count_);
        for_each([&](const Triple& t) { out.push_back(t); });
        return out;
    }

private:
    DiagonalProduct S_;
    std::uint64_t max_work_;
    std::uint64_t count_ = 0;
};

inline SquareSet enumerate_squares(const DiagonalProduct& S, std::uint64_t max_work = kDefaultMaxSquareWork) {
    return SquareSet(S, max_work);
}

// μ(x,y) = cnt(x,y) / |𝒯|: a uniform point of a uniform square in S.
inline FiniteDistribution<Pair> square_cover_distribution(const SquareProfile& P) {
    if (P.triple_count() == 0) throw NoSquaresError("diagonal product contains no squares");
    return FiniteDistribution<Pair>(P.pairs(),
                                    std::vector<std::uint64_t>(P.counts().begin(), P.counts().end()),
                                    P.triple_count());
}

inline FiniteDistribution<Pair> square_cover_distribution(const DiagonalProduct& S) {
    return square_cover_distribution(SquareProfile(S));
}

inline FiniteDistribution<Pair> uniform_on(const DiagonalProduct& S) {
    if (S.empty()) throw InputError("uniform distribution on an empty diagonal product");
    return FiniteDistribution<Pair>::uniform(S.pairs());
}

// ν_i(x,y) = c_i(x,y) / |𝒯_i| with c_i counting w with w_i = 1.
inline FiniteDistribution<Pair> conditional_square_distribution(const SquareProfile& P, int i) {
    require(P.has_per_coordinate(), "square profile was built without per-coordinate counts");
    require(i >= 0 && i < P.ambient_dim(), "coordinate out of range");
    if (P.coordinate_totals()[i] == 0)
        throw ConditioningError("no square in S has w_" + std::to_string(i) + " = 1");
    std::vector<Pair> support;
    std::vector<std::uint64_t> nums;
    for (std::size_t k = 0; k < P.pairs().size(); ++k) {
        auto c = P.coordinate_count(k, i);
        if (c == 0) continue;
        support.push_back(P.pairs()[k]);
        nums.push_back(c);
    }
    return FiniteDistribution<Pair>(std::move(support), std::move(nums), P.coordinate_totals()[i]);
}

inline FiniteDistribution<Pair> conditional_square_distribution(const DiagonalProduct& S, int i) {
    SquareProfileOptions opt;
    opt.per_coordinate = true;
    return conditional_square_distribution(SquareProfile(S, opt), i);
}

struct NontrivialStats {
    Rational mean;                        // E |{i : w_i = 1}| over (x,y,w) uniform in 𝒯
    std::vector<std::uint64_t> histogram; // triples of 𝒯 by |w|
};

inline NontrivialStats nontrivial_coordinate_stats(const SquareProfile& P) {
    require(P.has_weight_histogram(), "square profile was built without a weight histogram");
    if (P.triple_count() == 0) throw NoSquaresError("diagonal product contains no squares");
    BigInt weighted = 0;
    for (std::size_t k = 0; k < P.weight_histogram().size(); ++k)
        weighted += BigInt(P.weight_histogram()[k]) * k;
    return {Rational(weighted, BigInt(P.triple_count())), P.weight_histogram()};
}

inline NontrivialStats nontrivial_coordinate_stats(const SquareSet& T) {
    SquareProfileOptions opt;
    opt.weight_histogram = true;
    return nontrivial_coordinate_stats(SquareProfile(T.diagonal_product(), opt));
}

struct ConditionalDistances {
    std::vector<std::optional<Rational>> per_coordinate; // nullopt where no square has w_i = 1
    std::vector<int> excluded;
    Rational mean;                                       // over included coordinates
};

// ||μ - ν_i||_1 for every i, from one per-coordinate profile.
inline ConditionalDistances conditional_distances(const SquareProfile& P) {
    require(P.has_per_coordinate(), "square profile was built without per-coordinate counts");
    if (P.triple_count() == 0) throw NoSquaresError("diagonal product contains no squares");
    const int n = P.ambient_dim();
    ConditionalDistances out;
    Rational sum = 0;
    int included = 0;
    const unsigned __int128 T = P.triple_count();
    for (int i = 0; i < n; ++i) {
        const unsigned __int128 Ti = P.coordinate_totals()[i];
        if (Ti == 0) {
            out.per_coordinate.push_back(std::nullopt);
            out.excluded.push_back(i);
            continue;
        }
        unsigned __int128 acc = 0;
        for (std::size_t k = 0; k < P.pairs().size(); ++k) {
            const unsigned __int128 a = static_cast<unsigned __int128>(P.counts()[k]) * Ti;
            const unsigned __int128 b = static_cast<unsigned __int128>(P.coordinate_count(k, i)) * T;
            acc += a > b ? a - b : b - a;
        }
        Rational d = frac_u128(acc, T * Ti);
        sum += d;
        ++included;
        out.per_coordinate.push_back(d);
    }
    out.mean = included ? sum / included : Rational(0);
    return out;
}

} // namespace spreadlab::diag
