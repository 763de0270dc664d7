#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "cantor/cdf.hpp"
#include "cantor/measure.hpp"
#include "cantor/targets.hpp"

using namespace cantor;

namespace {

ApproxTarget random_target(std::mt19937_64& rng, unsigned long max_n) {
    ApproxTarget t;
    t.n = 1 + rng() % max_n;
    t.y = Rational(static_cast<long>(rng() % 200) - 100, 1 + static_cast<long>(rng() % 37));
    t.y.canonicalize();
    t.sigma = Rational(1 + static_cast<long>(rng() % 50), 2 + static_cast<long>(rng() % 400));
    t.sigma.canonicalize();
    return t;
}

} // namespace

TEST(BuildTargetUnion, Examples) {
    IntervalUnion a = build_target_union({1, 0, Rational(1, 4)});
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a.segments()[0], (Segment{0, Rational(1, 8), false, true}));
    EXPECT_EQ(a.segments()[1], Segment::open(Rational(3, 8), Rational(5, 8)));
    EXPECT_EQ(a.segments()[2], (Segment{Rational(7, 8), 1, true, false}));

    EXPECT_EQ(build_target_union({1, 0, Rational(3, 4)}), IntervalUnion::unit());

    IntervalUnion c = build_target_union({2, Rational(1, 2), Rational(1, 8)});
    ASSERT_EQ(c.size(), 4u);
    for (int b = 0; b < 4; ++b) {
        // centred at (2b+1)/8, half-width sigma/4 = 1/32
        EXPECT_EQ(c.segments()[b], Segment::open(make_rational(8 * b + 3, 32), make_rational(8 * b + 5, 32)));
    }
}

TEST(BuildTargetUnion, MatchesGrid) {
    // membership of grid points against the defining inequality
    std::mt19937_64 rng(2);
    for (int i = 0; i < 40; ++i) {
        ApproxTarget t = random_target(rng, 6);
        if (t.covers_unit()) continue;
        IntervalUnion u = build_target_union(t);
        for (int g = 0; g <= 997; ++g) {
            Rational x(g, 997);
            bool inside = dist_to_int(Rational(x * Rational(pow2(t.n)) - t.y)) < t.sigma;
            EXPECT_EQ(u.contains(x), inside);
        }
    }
}

TEST(BuildTargetUnion, LimitsAndErrors) {
    EXPECT_THROW(build_target_union({21, 0, Rational(1, 1000)}), ComputationError);
    EXPECT_THROW(build_target_union({0, 0, Rational(1, 4)}), DomainError);
    EXPECT_THROW(build_target_union({3, 0, 0}), DomainError);
}

TEST(MeasureTarget, Examples) {
    EXPECT_EQ(measure_target({1, 0, Rational(3, 4)}).value(), 1);
    // ||2x - 1/2|| < 1/6  <=>  x in (1/6, 1/3) u (2/3, 5/6)
    EXPECT_EQ(build_target_union({1, Rational(1, 2), Rational(1, 6)}),
              IntervalUnion({Segment::open(Rational(1, 6), Rational(1, 3)), Segment::open(Rational(2, 3), Rational(5, 6))}));
    Rational expect = cantor_cdf(Rational(1, 3)) - cantor_cdf(Rational(1, 6)) + cantor_cdf(Rational(5, 6)) -
                      cantor_cdf(Rational(2, 3));
    EXPECT_EQ(expect, Rational(1, 2));
    Rational got = measure_target({1, Rational(1, 2), Rational(1, 6)}).value();
    EXPECT_EQ(got, expect);
    auto br = oracle::covering_measure(build_target_union({1, Rational(1, 2), Rational(1, 6)}), 18);
    EXPECT_LE(br.lower, got);
    EXPECT_GE(br.upper, got);
}

TEST(MeasureTarget, AgreesWithExplicitUnion) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 150; ++i) {
        ApproxTarget t = random_target(rng, 10);
        EXPECT_EQ(measure_target(t).value(), measure_union(build_target_union(t)).value())
            << "n=" << t.n << " y=" << t.y << " sigma=" << t.sigma;
    }
}

TEST(MeasureTarget, MonotoneInSigma) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 60; ++i) {
        ApproxTarget t = random_target(rng, 9);
        ApproxTarget wider = t;
        wider.sigma = t.sigma * Rational(3, 2);
        EXPECT_TRUE(build_target_union(t).subset_of(build_target_union(wider)));
        EXPECT_LE(measure_target(t).value(), measure_target(wider).value());
    }
}

TEST(MeasureTarget, TranslationByOne) {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 40; ++i) {
        ApproxTarget t = random_target(rng, 12);
        ApproxTarget s = t;
        s.y += 1;
        EXPECT_EQ(measure_target(t).value(), measure_target(s).value());
        if (t.n <= 10) EXPECT_EQ(build_target_union(t), build_target_union(s));
    }
}

TEST(MeasureTarget, ReflectionSymmetry) {
    // mu is symmetric, and x -> 1-x sends A_n^y to A_n^-y
    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
        ApproxTarget t = random_target(rng, 14);
        ApproxTarget m = t;
        m.y = -t.y;
        EXPECT_EQ(measure_target(t).value(), measure_target(m).value());
    }
}

TEST(MeasureTarget, LevelTwentyCovering) {
    // mu(A) against (level-20 intervals meeting A) 2^-20, within 2 (boundary count) 2^-20
    for (ApproxTarget t : {ApproxTarget{2, 0, Rational(1, 16)}, ApproxTarget{3, Rational(1, 3), Rational(1, 10)}}) {
        IntervalUnion u = build_target_union(t);
        auto br = oracle::covering_measure(u, 20);
        Rational mu = measure_target(t).value();
        Rational w(1, 1 << 20);
        Rational boundary = br.upper - br.lower;
        Rational diff = mu - br.upper;
        if (diff < 0) diff = -diff;
        EXPECT_LE(diff, 2 * boundary + w);
        EXPECT_LE(br.lower, mu);
        EXPECT_LE(mu, br.upper);
    }
}

TEST(MeasureTarget, BudgetExhaustion) {
    EXPECT_THROW(measure_target({24, 0, Rational(1, 1000)}, TraversalBudget{100}), BudgetExceeded);
    EXPECT_NO_THROW(measure_target({24, 0, Rational(1, 1000)}));
}

TEST(TargetEndpoints, MatchEnumeration) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 120; ++i) {
        ApproxTarget t = random_target(rng, 7);
        unsigned N = static_cast<unsigned>(rng() % 12);
        IntervalUnion u = build_target_union(t);
        EXPECT_EQ(count_target_endpoints(N, t), oracle::count_endpoints(N, u.segments()))
            << "N=" << N << " n=" << t.n << " y=" << t.y << " sigma=" << t.sigma;
        EXPECT_EQ(count_target_endpoints(N, t), count_endpoints_in_union(N, u));
    }
}
