#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "../f2/ops.hpp"
#include "../f2/set.hpp"
#include "../spread/algebraic.hpp"
#include "one_set.hpp"
#include "three_set.hpp"
#include "two_set.hpp"

namespace spreadlab::uniform {

struct VerificationReport {
    std::vector<std::string> failures;
    std::size_t pieces_checked = 0;
    std::uint64_t total = 0;    // recomputed |S(X, Y, Z)|, or |X| |Y| for rectangles
    std::uint64_t covered = 0;  // recomputed
    bool ok() const { return failures.empty(); }
};

struct VerifyOptions {
    std::optional<Rational> max_loss;  // remainder bound as a fraction of total; default the result's eta
    bool recertify = true;
};

namespace detail {

inline std::string piece_label(std::size_t k) { return "piece " + std::to_string(k); }

inline bool ascending_unique(const std::vector<std::uint32_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] >= v[i]) return false;
    return true;
}

// Flags members outside `parent` or outside `coset`.
inline void check_containment(const std::vector<std::uint32_t>& members, const f2::F2Set& parent,
                              const AffineSubspace& coset, const std::string& label, const char* which,
                              VerificationReport& rep) {
    if (!ascending_unique(members)) rep.failures.push_back(label + ": " + which + " members not strictly ascending");
    for (auto v : members) {
        if (v >= f2::universe_size(parent.ambient_dim()) || !parent.contains(v)) {
            rep.failures.push_back(label + ": " + which + " member " + std::to_string(v) + " is not in the input set");
            return;
        }
        if (!coset.contains(v)) {
            rep.failures.push_back(label + ": " + which + " member " + std::to_string(v) + " lies outside its coset");
            return;
        }
    }
}

inline void check_certificate(const std::vector<std::uint32_t>& members, const AffineSubspace& coset, int r,
                              const Rational& eps, std::uint64_t budget, const std::string& label, const char* which,
                              VerificationReport& rep) {
    if (members.empty()) {
        rep.failures.push_back(label + ": " + which + " is empty");
        return;
    }
    auto v = certify(members, coset, r, eps, budget);
    if (!v.passed) rep.failures.push_back(label + ": " + which + " is not (" + std::to_string(r) + ", " +
                                          to_string(eps) + ")-spread in its coset");
}

// Marks pairs (x, y) in a 2^{2n} bitset; reports the earlier owner of a pair already taken.
class PairLedger {
public:
    explicit PairLedger(int n) : n_(n), taken_(2 * n) {}

    // Returns false on the first collision and records it.
    bool claim(std::uint32_t x, std::uint32_t y) {
        const std::uint32_t key = (x << n_) | y;
        if (taken_.contains(key)) return false;
        taken_.insert(key);
        return true;
    }

private:
    int n_;
    f2::F2Set taken_;
};

} // namespace detail

// Rederives containment, pairwise disjointness, masses, coverage and the certificates of good
// pieces from X, Y, Z and the result alone.
inline VerificationReport verify_decomposition(const DecompositionResult& res, const f2::F2Set& X, const f2::F2Set& Y,
                                               const f2::F2Set& Z, const AffineSubspace& V,
                                               const VerifyOptions& opt = {}) {
    VerificationReport rep;
    const int n = V.ambient_dim();
    f2::check_same_dim(X, V);
    f2::check_same_dim(Y, V);
    f2::check_same_dim(Z, V);
    require(2 * n <= 28, "verification needs 2n <= 28");
    const auto xm = X.members(), ym = Y.members();
    rep.total = detail::diagonal_count(xm, ym, Z);
    if (rep.total != res.total)
        rep.failures.push_back("total " + std::to_string(res.total) + " differs from recomputed " +
                               std::to_string(rep.total));
    detail::PairLedger ledger(n);
    std::vector<std::int64_t> owner;  // filled lazily on collision
    std::size_t good_seen = 0;
    for (std::size_t k = 0; k < res.pieces.size(); ++k) {
        const Piece& p = res.pieces[k];
        const std::string label = detail::piece_label(k);
        ++rep.pieces_checked;
        if (p.space.ambient_dim() != n || !p.space.is_linear() || !V.contains(p.space)) {
            rep.failures.push_back(label + ": space is not a linear subspace of V");
            continue;
        }
        if (p.space.reduce(p.x_shift) != p.x_shift || p.space.reduce(p.y_shift) != p.y_shift)
            rep.failures.push_back(label + ": shifts are not reduced modulo the space");
        const std::size_t before = rep.failures.size();
        detail::check_containment(p.X, X, p.x_coset(), label, "X", rep);
        detail::check_containment(p.Y, Y, p.y_coset(), label, "Y", rep);
        detail::check_containment(p.Z, Z, p.z_coset(), label, "Z", rep);
        const bool contained = rep.failures.size() == before;
        const f2::F2Set zset = f2::F2Set::from_members(n, p.Z);
        std::uint64_t mass = 0;
        bool collided = false;
        for (auto x : p.X)
            for (auto y : p.Y) {
                if (!zset.contains(x ^ y)) continue;
                ++mass;
                if (!ledger.claim(x, y) && !collided) {
                    collided = true;
                    // Second pass over earlier pieces to name the owner.
                    std::string who = "an earlier piece";
                    for (std::size_t j = 0; j < k; ++j) {
                        const Piece& q = res.pieces[j];
                        if (std::binary_search(q.X.begin(), q.X.end(), x) &&
                            std::binary_search(q.Y.begin(), q.Y.end(), y) &&
                            std::binary_search(q.Z.begin(), q.Z.end(), x ^ y)) {
                            who = detail::piece_label(j);
                            break;
                        }
                    }
                    rep.failures.push_back(label + ": pair (" + std::to_string(x) + ", " + std::to_string(y) +
                                           ") already covered by " + who);
                }
            }
        rep.covered += mass;
        if (mass != p.mass)
            rep.failures.push_back(label + ": mass " + std::to_string(p.mass) + " differs from recomputed " +
                                   std::to_string(mass));
        if (!p.good) continue;
        ++good_seen;
        if (p.certificates.size() != 3 || !p.certified())
            rep.failures.push_back(label + ": marked good without three passing certificates");
        if (opt.recertify && contained) {
            const int r = res.params.cert_r;
            const Rational& e = res.params.cert_epsilon;
            detail::check_certificate(p.X, p.x_coset(), r, e, res.params.budget, label, "X", rep);
            detail::check_certificate(p.Y, p.y_coset(), r, e, res.params.budget, label, "Y", rep);
            detail::check_certificate(p.Z, p.z_coset(), r, e, res.params.budget, label, "Z", rep);
        }
    }
    if (good_seen != res.good.size()) rep.failures.push_back("good index set disagrees with the pieces' flags");
    if (rep.covered > rep.total) rep.failures.push_back("pieces cover more than S(X, Y, Z)");
    const Rational max_loss = opt.max_loss.value_or(res.params.eta);
    if (rep.covered <= rep.total && Rational(BigInt(rep.total - rep.covered)) > max_loss * Rational(BigInt(rep.total)))
        rep.failures.push_back("remainder " + std::to_string(rep.total - rep.covered) + " of " +
                               std::to_string(rep.total) + " exceeds the loss bound " + to_string(max_loss));
    return rep;
}

// Rectangle form: X_i x Y_i disjoint inside X x Y, both sides certified, coverage of |X| |Y|.
inline VerificationReport verify_rectangles(const TwoSetResult& res, const f2::F2Set& X, const f2::F2Set& Y,
                                            const AffineSubspace& V, int r, const Rational& epsilon,
                                            const Rational& max_loss,
                                            std::uint64_t budget = spread::kDefaultSpreadBudget) {
    VerificationReport rep;
    const int n = V.ambient_dim();
    f2::check_same_dim(X, V);
    f2::check_same_dim(Y, V);
    require(2 * n <= 28, "verification needs 2n <= 28");
    rep.total = X.size() * Y.size();
    detail::PairLedger ledger(n);
    for (std::size_t k = 0; k < res.pieces.size(); ++k) {
        const Piece& p = res.pieces[k];
        const std::string label = detail::piece_label(k);
        ++rep.pieces_checked;
        if (p.space.ambient_dim() != n || !p.space.is_linear() || !V.direction().contains(p.space)) {
            rep.failures.push_back(label + ": space is not a linear subspace of V");
            continue;
        }
        const std::size_t before = rep.failures.size();
        detail::check_containment(p.X, X, p.x_coset(), label, "X", rep);
        detail::check_containment(p.Y, Y, p.y_coset(), label, "Y", rep);
        const bool contained = rep.failures.size() == before;
        bool collided = false;
        for (auto x : p.X)
            for (auto y : p.Y)
                if (!ledger.claim(x, y) && !collided) {
                    collided = true;
                    rep.failures.push_back(label + ": overlaps an earlier rectangle at (" + std::to_string(x) + ", " +
                                           std::to_string(y) + ")");
                }
        const std::uint64_t mass = static_cast<std::uint64_t>(p.X.size()) * p.Y.size();
        rep.covered += mass;
        if (mass != p.mass) rep.failures.push_back(label + ": mass differs from |X_i| |Y_i|");
        if (!contained) continue;
        detail::check_certificate(p.X, p.x_coset(), r, epsilon, budget, label, "X", rep);
        detail::check_certificate(p.Y, p.y_coset(), r, epsilon, budget, label, "Y", rep);
    }
    if (rep.covered != res.covered) rep.failures.push_back("reported coverage differs from recomputed");
    if (rep.covered > rep.total) {
        rep.failures.push_back("rectangles cover more than X x Y");
    } else if (Rational(BigInt(rep.total - rep.covered)) > max_loss * Rational(BigInt(rep.total))) {
        rep.failures.push_back("uncovered " + std::to_string(rep.total - rep.covered) + " of " +
                               std::to_string(rep.total) + " exceeds the loss bound " + to_string(max_loss));
    }
    return rep;
}

// One-set form: disjoint pieces plus remainder partition X, every piece certified with
// |X_i| >= eta |V_i| and the codimension allowance, remainder at most eta |V|.
inline VerificationReport verify_one_set(const OneSetResult& res, const f2::F2Set& X,
                                         std::uint64_t budget = spread::kDefaultSpreadBudget) {
    VerificationReport rep;
    const AffineSubspace& V = res.space;
    f2::check_same_dim(X, V);
    rep.total = X.size();
    f2::F2Set seen(V.ambient_dim());
    auto claim_all = [&](const std::vector<std::uint32_t>& m, const std::string& label) {
        for (auto v : m) {
            if (seen.contains(v)) {
                rep.failures.push_back(label + ": point " + std::to_string(v) + " appears twice");
                return;
            }
            seen.insert(v);
        }
    };
    for (std::size_t k = 0; k < res.pieces.size(); ++k) {
        const auto& p = res.pieces[k];
        const std::string label = detail::piece_label(k);
        ++rep.pieces_checked;
        if (!V.contains(p.space)) {
            rep.failures.push_back(label + ": space is not inside V");
            continue;
        }
        const std::size_t before = rep.failures.size();
        detail::check_containment(p.members, X, p.space, label, "members", rep);
        claim_all(p.members, label);
        rep.covered += p.members.size();
        if (Rational(BigInt(p.members.size())) < res.eta * Rational(BigInt(p.space.size())))
            rep.failures.push_back(label + ": density below eta");
        if (p.space.dim() < V.dim() - res.codim_allowance())
            rep.failures.push_back(label + ": dimension below the allowance");
        if (rep.failures.size() == before)
            detail::check_certificate(p.members, p.space, res.r, res.epsilon, budget, label, "members", rep);
    }
    claim_all(res.remainder, "remainder");
    for (auto v : res.remainder)
        if (!X.contains(v)) {
            rep.failures.push_back("remainder: point " + std::to_string(v) + " is not in X");
            break;
        }
    if (rep.covered + res.remainder.size() != rep.total) rep.failures.push_back("pieces and remainder do not partition X");
    if (Rational(BigInt(res.remainder.size())) > res.eta * Rational(BigInt(V.size())))
        rep.failures.push_back("remainder exceeds eta |V|");
    if (static_cast<double>(res.pieces.size()) > std::exp2(res.log2_piece_cap()) + 1e-9)
        rep.failures.push_back("piece count exceeds the cap");
    return rep;
}

} // namespace spreadlab::uniform
