#pragma once

#include <optional>

#include "../core/rational.hpp"
#include "../f2/distribution.hpp"
#include "squares.hpp"

namespace spreadlab::diag {

// value / target - 1; zero when both vanish.
inline Rational relative_deviation(const Rational& value, const Rational& target) {
    if (target == 0) {
        require(value == 0, "relative deviation against a zero target");
        return 0;
    }
    return value / target - 1;
}

struct CountingReport {
    int n = 0;
    std::uint64_t size_x = 0, size_y = 0, size_z = 0;
    std::uint64_t diagonal_size = 0;  // |S|
    std::uint64_t triple_count = 0;   // |𝒯|
    Rational alpha_x, alpha_y, alpha_z, alpha;  // alpha = alpha_x alpha_y alpha_z
    Rational s_density;   // |S| 2^{-2n}, target alpha
    Rational gamma_l1;    // target alpha^2
    Rational gamma_l2sq;  // target alpha^3
    Rational t_density;   // |𝒯| 2^{-3n}, target alpha^2
    Rational dev_s, dev_gamma_l1, dev_gamma_l2sq, dev_t;
    std::optional<Rational> l1_mu_us;         // ||μ - U_S||_1
    std::optional<Rational> mu_l2sq;          // ||μ||_2^2
    std::optional<Rational> mean_nontrivial;  // E |I_s| over 𝒯

    // ||μ - U_S||_1^2 <= |S| ||μ||_2^2 - 1.
    bool cauchy_schwarz_holds() const {
        if (!l1_mu_us) return true;
        return (*l1_mu_us) * (*l1_mu_us) <= Rational(BigInt(diagonal_size)) * (*mu_l2sq) - 1;
    }

    Rational max_abs_deviation() const {
        Rational m = 0;
        for (const Rational* d : {&dev_s, &dev_gamma_l1, &dev_gamma_l2sq, &dev_t})
            m = std::max(m, abs(*d));
        return m;
    }
};

inline Rational l1_to_uniform(const SquareProfile& P) {
    // sum over S of |cnt/|𝒯| - 1/|S||
    const unsigned __int128 T = P.triple_count();
    const unsigned __int128 m = P.pairs().size();
    unsigned __int128 acc = 0;
    for (auto c : P.counts()) {
        const unsigned __int128 a = static_cast<unsigned __int128>(c) * m;
        acc += a > T ? a - T : T - a;
    }
    return frac_u128(acc, T * m);
}

inline CountingReport counting_report(const F2Set& X, const F2Set& Y, const F2Set& Z,
                                      std::uint64_t max_pairs = kDefaultMaxPairs,
                                      std::uint64_t max_work = kDefaultMaxSquareWork) {
    DiagonalProduct S(X, Y, Z, max_pairs);
    SquareProfileOptions opt;
    opt.weight_histogram = true;
    opt.max_work = max_work;
    SquareProfile P(S, opt);
    const int n = S.ambient_dim();
    CountingReport r;
    r.n = n;
    r.size_x = X.size();
    r.size_y = Y.size();
    r.size_z = Z.size();
    r.diagonal_size = S.size();
    r.triple_count = P.triple_count();
    r.alpha_x = X.density();
    r.alpha_y = Y.density();
    r.alpha_z = Z.density();
    r.alpha = r.alpha_x * r.alpha_y * r.alpha_z;
    r.s_density = Rational(BigInt(S.size()), BigInt(1) << (2 * n));
    r.gamma_l1 = P.gamma_l1();
    r.gamma_l2sq = P.gamma_l2sq();
    r.t_density = Rational(BigInt(P.triple_count()), BigInt(1) << (3 * n));
    r.dev_s = relative_deviation(r.s_density, r.alpha);
    r.dev_gamma_l1 = relative_deviation(r.gamma_l1, r.alpha * r.alpha);
    r.dev_gamma_l2sq = relative_deviation(r.gamma_l2sq, r.alpha * r.alpha * r.alpha);
    r.dev_t = relative_deviation(r.t_density, r.alpha * r.alpha);
    if (P.triple_count() > 0) {
        r.l1_mu_us = l1_to_uniform(P);
        r.mu_l2sq = f2::l2_norm_sq(square_cover_distribution(P));
        r.mean_nontrivial = nontrivial_coordinate_stats(P).mean;
    }
    return r;
}

} // namespace spreadlab::diag
