#include <gtest/gtest.h>

#include <cmath>

#include <spreadlab/f2/ops.hpp>
#include <spreadlab/uniform/verify.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace spreadlab;
using namespace spreadlab::f2;
using namespace spreadlab::uniform;

namespace {

F2Set parallel_pair(int n, int codim) {
    const AffineSubspace W = gen::checks_subspace(n, codim);
    F2Set A = as_set(W);
    W.translated(1).for_each_point([&](std::uint32_t p) { A.insert(p); });
    return A;
}

std::vector<std::uint32_t> in_coset(const F2Set& A, const AffineSubspace& W) {
    std::vector<std::uint32_t> out;
    W.for_each_point([&](std::uint32_t p) {
        if (A.contains(p)) out.push_back(p);
    });
    std::sort(out.begin(), out.end());
    return out;
}

void expect_oracle_spread(const DecompositionResult& d) {
    for (std::size_t k : d.good) {
        const Piece& p = d.pieces[k];
        const int r = d.params.cert_r;
        const Rational& e = d.params.cert_epsilon;
        EXPECT_TRUE(oracle::spread_by_functionals(p.X, p.x_coset(), r, e)) << "piece " << k;
        EXPECT_TRUE(oracle::spread_by_functionals(p.Y, p.y_coset(), r, e)) << "piece " << k;
        EXPECT_TRUE(oracle::spread_by_functionals(p.Z, p.z_coset(), r, e)) << "piece " << k;
    }
}

std::string joined(const VerificationReport& rep) {
    std::string s;
    for (const auto& f : rep.failures) s += f + "\n";
    return s;
}

} // namespace

TEST(SpreadOracle, AgreesWithTheLibraryChecker) {
    Rng rng(91);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(4));
        const F2Set A = gen::random_nonempty_set(n, rng);
        const int r = 1 + static_cast<int>(rng.below(2));
        const Rational eps(1, 2 + static_cast<int>(rng.below(4)));
        const auto V = AffineSubspace::full(n);
        const auto m = A.members();
        EXPECT_EQ(oracle::spread_by_functionals(m, V, r, eps),
                  spread::check_algebraic_spread(A, V, spread::SpreadParams{r, eps}).passed);
    }
}

TEST(OneSet, SpreadDenseSetIsOnePiece) {
    const auto V = AffineSubspace::full(6);
    const auto res = uniformize_one_set(F2Set::full(6), V, 2, Rational(1, 4), Rational(1, 8));
    ASSERT_EQ(res.pieces.size(), 1u);
    EXPECT_EQ(res.pieces[0].space, V);
    EXPECT_EQ(res.pieces[0].members.size(), 64u);
    EXPECT_TRUE(res.remainder.empty());
}

TEST(OneSet, SparseSetIsAllRemainder) {
    const auto V = AffineSubspace::full(6);
    F2Set A(6);
    A.insert(3);
    A.insert(40);
    const auto res = uniformize_one_set(A, V, 1, Rational(1, 4), Rational(1, 16));
    EXPECT_TRUE(res.pieces.empty());
    EXPECT_EQ(res.remainder, (std::vector<std::uint32_t>{3, 40}));
}

TEST(OneSet, ParallelSubspacesWithNoise) {
    const int n = 8;
    Rng rng(5);
    const F2Set X = gen::add_random_points(parallel_pair(n, 2), 5, rng);
    const auto V = AffineSubspace::full(n);
    const Rational eps(1, 4), eta(1, 16);
    const auto res = uniformize_one_set(X, V, 2, eps, eta);
    const auto rep = verify_one_set(res, X);
    EXPECT_TRUE(rep.ok()) << joined(rep);
    ASSERT_FALSE(res.pieces.empty());
    for (const auto& p : res.pieces) {
        EXPECT_TRUE(oracle::spread_by_functionals(p.members, p.space, 2, eps));
        EXPECT_GE(p.space.dim(), n - res.codim_allowance());
    }
    EXPECT_LE(static_cast<double>(res.pieces.size()), std::exp2(res.log2_piece_cap()));
}

TEST(OneSet, ExtractionIncrementsAreBounded) {
    Rng rng(303);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + static_cast<int>(rng.below(4));
        const F2Set X = gen::random_nonempty_set(n, rng);
        const Rational eps(1, 2 + static_cast<int>(rng.below(3)));
        const int r = 1 + static_cast<int>(rng.below(2));
        const auto res = uniformize_one_set(X, AffineSubspace::full(n), r, eps, Rational(1, 8));
        for (const auto& p : res.pieces) {
            const double bound = std::ceil(std::log2(1 / to_double(p.start_density)) / to_double(eps) - 1e-12);
            EXPECT_LE(static_cast<double>(p.increments.size()), std::max(bound, 0.0));
            for (const auto& s : p.increments) EXPECT_GE(s.density_after, (1 + eps) * s.density_before);
        }
        EXPECT_TRUE(verify_one_set(res, X).ok());
    }
}

TEST(OneSet, CorruptedPieceIsNamed) {
    const int n = 6;
    const F2Set X = gen::random_set(n, Rational(1, 2), 3);
    auto res = uniformize_one_set(X, AffineSubspace::full(n), 1, Rational(1, 4), Rational(1, 16));
    ASSERT_GE(res.pieces.size(), 2u);
    res.pieces[1].members.push_back(res.pieces[0].members.front());
    std::sort(res.pieces[1].members.begin(), res.pieces[1].members.end());
    const auto rep = verify_one_set(res, X);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(joined(rep).find("piece 1"), std::string::npos);
}

TEST(TwoSet, FullSpaceIsOneRectangle) {
    const auto V = AffineSubspace::full(6);
    const auto res = uniformize_two_sets(F2Set::full(6), F2Set::full(6), V, 2, Rational(1, 4), Rational(1, 8));
    ASSERT_EQ(res.pieces.size(), 1u);
    EXPECT_EQ(res.covered, res.total);
    EXPECT_EQ(res.pieces[0].space, V);
}

TEST(TwoSet, HyperplaneSideDensifies) {
    const int n = 8;
    const auto V = AffineSubspace::full(n);
    const F2Set X = gen::random_set(n, Rational(3, 4), 1);
    const auto xm = X.members();
    ASSERT_TRUE(oracle::spread_by_functionals(xm, V, 2, Rational(1, 4)));
    const F2Set Y = gen::even_weight_set(n);
    const Rational eta(1, 8);
    const auto res = uniformize_two_sets(X, Y, V, 2, Rational(1, 4), eta);
    const auto rep = verify_rectangles(res, X, Y, V, 2, Rational(1, 4), eta);
    EXPECT_TRUE(rep.ok()) << joined(rep);
    for (const auto& p : res.pieces) EXPECT_EQ(p.Y.size(), p.space.size());
}

TEST(TwoSet, RandomQuarterDensity) {
    const int n = 8;
    const auto V = AffineSubspace::full(n);
    const F2Set X = gen::random_set(n, Rational(1, 4), 6), Y = gen::random_set(n, Rational(1, 4), 7);
    const Rational eta(1, 8);
    const auto res = uniformize_two_sets(X, Y, V, 2, Rational(1, 4), eta);
    EXPECT_GE(Rational(BigInt(res.covered)), (1 - eta) * Rational(BigInt(res.total)));
    const auto rep = verify_rectangles(res, X, Y, V, 2, Rational(1, 4), eta);
    EXPECT_TRUE(rep.ok()) << joined(rep);
}

TEST(TwoSet, LevelCapCarriesPartialOutput) {
    const int n = 7;
    const auto V = AffineSubspace::full(n);
    const F2Set X = gen::random_set(n, Rational(1, 4), 6), Y = gen::random_set(n, Rational(1, 4), 7);
    try {
        (void)uniformize_two_sets(X, Y, V, 2, Rational(1, 4), Rational(1, 100), spread::kDefaultSpreadBudget, 0);
        FAIL() << "expected the level cap to stop the decomposition";
    } catch (const IncompleteDecomposition& e) {
        const auto& part = e.partial();
        EXPECT_LT(part.covered, part.total);
        TwoSetResult as_rects{part.pieces, part.total, part.covered, 0};
        const auto rep = verify_rectangles(as_rects, X, Y, V, 2, Rational(1, 4), Rational(1));
        EXPECT_TRUE(rep.ok()) << joined(rep);
    }
}

TEST(TwoSet, OverlapIsDetected) {
    const int n = 6;
    const auto V = AffineSubspace::full(n);
    const F2Set X = gen::random_set(n, Rational(1, 2), 3), Y = gen::random_set(n, Rational(1, 2), 4);
    auto res = uniformize_two_sets(X, Y, V, 1, Rational(1, 4), Rational(1, 8));
    ASSERT_FALSE(res.pieces.empty());
    res.pieces.push_back(res.pieces.front());
    res.covered += res.pieces.back().mass;
    const auto rep = verify_rectangles(res, X, Y, V, 1, Rational(1, 4), Rational(1, 8));
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(joined(rep).find("overlaps an earlier rectangle"), std::string::npos);
}

TEST(Round, FullSpaceIsOneGoodPiece) {
    const int n = 6;
    const auto V = AffineSubspace::full(n);
    const F2Set F = F2Set::full(n);
    const auto rr = uniformize_three_sets_round(F, F, F, V, 1, Rational(1, 4), Rational(1, 10));
    const auto& d = rr.decomposition;
    ASSERT_EQ(d.pieces.size(), 1u);
    EXPECT_TRUE(d.pieces[0].good);
    EXPECT_EQ(d.covered, d.total);
    EXPECT_EQ(d.total, std::uint64_t{1} << (2 * n));
}

TEST(Round, EmptyZGivesEmptyOutput) {
    const int n = 6;
    const auto rr = uniformize_three_sets_round(F2Set::full(n), F2Set::full(n), F2Set(n), AffineSubspace::full(n), 1,
                                                Rational(1, 4), Rational(1, 10));
    EXPECT_TRUE(rr.decomposition.pieces.empty());
    EXPECT_EQ(rr.decomposition.total, 0u);
    EXPECT_EQ(rr.decomposition.remainder, 0u);
}

TEST(Round, RandomHalfDensityAtTen) {
    const int n = 10;
    const auto V = AffineSubspace::full(n);
    const F2Set X = gen::random_set(n, Rational(1, 2), 8), Y = gen::random_set(n, Rational(1, 2), 9),
                Z = gen::random_set(n, Rational(1, 2), 10);
    const Rational eta(1, 10);
    const auto rr = uniformize_three_sets_round(X, Y, Z, V, 1, Rational(1, 4), eta);
    const auto& d = rr.decomposition;
    EXPECT_EQ(d.total, oracle::diagonal_product_size(X, Y, Z));
    EXPECT_GE(Rational(BigInt(d.good_mass)) * 10, Rational(BigInt(d.total)));
    // Discarded at most 8 eta |S|: the lemma's 4 eta, doubled.
    const auto rep = verify_decomposition(d, X, Y, Z, V, {8 * eta, true});
    EXPECT_TRUE(rep.ok()) << joined(rep);
    EXPECT_EQ(rr.loss.outside_rectangles + rr.loss.z_remainder + rr.loss.small_pieces, d.remainder);
    EXPECT_FALSE(d.notes.empty());
}

TEST(Round, PiecesRespectTheFilters) {
    const int n = 8;
    const auto V = AffineSubspace::full(n);
    const auto t = gen::random_triple(n, Rational(1, 2), 21);
    const Rational eps(1, 4), eta(1, 10);
    const auto rr = uniformize_three_sets_round(t.X, t.Y, t.Z, V, 1, eps, eta, {3});
    const auto& d = rr.decomposition;
    EXPECT_EQ(rr.r0, 3);
    for (const auto& p : d.pieces) {
        const Rational cells(BigInt(p.space.size()) * p.space.size());
        EXPECT_GE(Rational(BigInt(p.mass)), eta * eta * rr.alpha * rr.alpha * rr.kappa * cells);
        if (p.good) {
            EXPECT_TRUE(p.certified());
        }
    }
    const auto rep = verify_decomposition(d, t.X, t.Y, t.Z, V, {Rational(1), true});
    EXPECT_TRUE(rep.ok()) << joined(rep);
    expect_oracle_spread(d);
}

TEST(Recursive, AlreadySpreadIsDepthZero) {
    const int n = 6;
    const auto V = AffineSubspace::full(n);
    const F2Set F = F2Set::full(n);
    const auto d = uniformize_recursive(F, F, F, V, 1, Rational(1, 4), Rational(1, 10));
    ASSERT_EQ(d.pieces.size(), 1u);
    EXPECT_EQ(d.pieces[0].depth, 0);
    EXPECT_TRUE(d.pieces[0].good);
    EXPECT_EQ(d.remainder, 0u);
}

TEST(Recursive, HyperplaneTripleGoesDense) {
    const int n = 8;
    const auto V = AffineSubspace::full(n);
    const F2Set H = gen::even_weight_set(n);
    const Rational eta(1, 10);
    const auto d = uniformize_recursive(H, H, H, V, 1, Rational(1, 4), eta);
    const auto rep = verify_decomposition(d, H, H, H, V);
    EXPECT_TRUE(rep.ok()) << joined(rep);
    const AffineSubspace Hs = gen::checks_subspace(n, 1);
    for (const auto& p : d.pieces) {
        EXPECT_TRUE(p.good);
        EXPECT_TRUE(Hs.contains(p.x_coset())) << "piece outside the hyperplane";
        EXPECT_EQ(p.X.size(), p.space.size());
        EXPECT_EQ(p.Y.size(), p.space.size());
        EXPECT_EQ(p.Z.size(), p.space.size());
    }
}

TEST(Recursive, SubspaceUnionWithRandomSets) {
    const int n = 10;
    const auto V = AffineSubspace::full(n);
    const F2Set X = parallel_pair(n, 2);
    const F2Set Y = gen::random_set(n, Rational(1, 2), 12), Z = gen::random_set(n, Rational(1, 2), 13);
    const Rational eta(1, 5);
    const auto d = uniformize_recursive(X, Y, Z, V, 1, Rational(1, 4), eta);
    EXPECT_GE(Rational(BigInt(d.covered)), (1 - eta) * Rational(BigInt(d.total)));
    EXPECT_EQ(d.good.size(), d.pieces.size());
    const auto rep = verify_decomposition(d, X, Y, Z, V);
    EXPECT_TRUE(rep.ok()) << joined(rep);
    expect_oracle_spread(d);
}

TEST(Recursive, OutputIsCanonicalAndDeterministic) {
    const int n = 7;
    const auto V = AffineSubspace::full(n);
    const auto t = gen::random_triple(n, Rational(1, 2), 44);
    const auto a = uniformize_recursive(t.X, t.Y, t.Z, V, 1, Rational(1, 4), Rational(1, 5));
    const auto b = uniformize_recursive(t.X, t.Y, t.Z, V, 1, Rational(1, 4), Rational(1, 5));
    ASSERT_EQ(a.pieces.size(), b.pieces.size());
    for (std::size_t k = 0; k < a.pieces.size(); ++k) {
        EXPECT_FALSE(canonical_less(a.pieces[k], b.pieces[k]) || canonical_less(b.pieces[k], a.pieces[k]));
        if (k) {
            EXPECT_TRUE(canonical_less(a.pieces[k - 1], a.pieces[k]));
        }
    }
}

TEST(Recursive, RejectsSetsOutsideV) {
    const int n = 6;
    const auto H = gen::checks_subspace(n, 1);
    EXPECT_THROW(uniformize_recursive(F2Set::full(n), as_set(H), as_set(H), H, 1, Rational(1, 4), Rational(1, 5)),
                 InputError);
}

class VerifyControls : public ::testing::Test {
protected:
    void SetUp() override {
        t = gen::random_triple(n, Rational(1, 2), 77);
        d = uniformize_recursive(t.X, t.Y, t.Z, V, 1, Rational(1, 4), Rational(1, 5));
        ASSERT_TRUE(verify_decomposition(d, t.X, t.Y, t.Z, V).ok());
        for (std::size_t k = 0; k < d.pieces.size(); ++k)
            if (d.pieces[k].space.dim() >= 1) {
                target = k;
                break;
            }
    }
    static constexpr int n = 7;
    AffineSubspace V = AffineSubspace::full(n);
    gen::Triple t{F2Set(n), F2Set(n), F2Set(n)};
    DecompositionResult d;
    std::size_t target = 0;
};

TEST_F(VerifyControls, PointMovedOutOfCoset) {
    Piece& p = d.pieces[target];
    std::uint32_t outside = 0;
    t.X.for_each([&](std::uint32_t v) {
        if (!outside && !p.x_coset().contains(v)) outside = v;
    });
    ASSERT_NE(outside, 0u);
    p.X.back() = outside;
    std::sort(p.X.begin(), p.X.end());
    const auto rep = verify_decomposition(d, t.X, t.Y, t.Z, V);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(joined(rep).find("piece " + std::to_string(target) + ": X member"), std::string::npos) << joined(rep);
}

TEST_F(VerifyControls, DuplicatedPieceOverlaps) {
    d.pieces.push_back(d.pieces[target]);
    const auto rep = verify_decomposition(d, t.X, t.Y, t.Z, V);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(joined(rep).find("already covered by piece " + std::to_string(target)), std::string::npos)
        << joined(rep);
}

TEST_F(VerifyControls, NonSpreadPieceMarkedGood) {
    Piece fake;
    fake.space = V;
    fake.X = in_coset(t.X, gen::checks_subspace(n, 1));
    fake.Y = t.Y.members();
    fake.Z = t.Z.members();
    fake.certificates.assign(3, Certificate{});
    fake.good = true;
    DecompositionResult lone;
    lone.pieces = {fake};
    lone.total = oracle::diagonal_product_size(t.X, t.Y, t.Z);
    lone.params = d.params;
    for (auto x : fake.X)
        for (auto y : fake.Y) lone.pieces[0].mass += t.Z.contains(x ^ y);
    lone.finalize();
    const auto rep = verify_decomposition(lone, t.X, t.Y, t.Z, V, {Rational(1), true});
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(joined(rep).find("piece 0: X is not"), std::string::npos) << joined(rep);
}

TEST_F(VerifyControls, WrongMassAndLossBound) {
    d.pieces[target].mass += 1;
    auto rep = verify_decomposition(d, t.X, t.Y, t.Z, V);
    EXPECT_NE(joined(rep).find("mass"), std::string::npos);
    d.pieces[target].mass -= 1;
    d.pieces.erase(d.pieces.begin() + static_cast<std::ptrdiff_t>(target));
    d.finalize();
    rep = verify_decomposition(d, t.X, t.Y, t.Z, V, {Rational(0), true});
    EXPECT_NE(joined(rep).find("exceeds the loss bound"), std::string::npos);
}
