#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "cantor/cdf.hpp"
#include "cantor/measure.hpp"

using namespace cantor;

TEST(CantorCdf, KnownValues) {
    EXPECT_EQ(cantor_cdf(0), 0);
    EXPECT_EQ(cantor_cdf(1), 1);
    EXPECT_EQ(cantor_cdf(Rational(1, 3)), Rational(1, 2));
    EXPECT_EQ(cantor_cdf(Rational(2, 3)), Rational(1, 2));
    EXPECT_EQ(cantor_cdf(Rational(1, 2)), Rational(1, 2));
    EXPECT_EQ(cantor_cdf(Rational(1, 4)), Rational(1, 3));
    EXPECT_EQ(cantor_cdf(Rational(3, 4)), Rational(2, 3));
    EXPECT_EQ(cantor_cdf(Rational(2, 9)), Rational(1, 4));
    EXPECT_EQ(cantor_cdf(Rational(1, 10)), Rational(1, 5)); // 0.00220022..._3
}

TEST(CantorCdf, OutOfRange) {
    EXPECT_THROW(cantor_cdf(Rational(-1, 5)), DomainError);
    EXPECT_THROW(cantor_cdf(Rational(6, 5)), DomainError);
}

TEST(CantorCdf, MatchesRecursionBracket) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        Rational x = oracle::random_unit_rational(rng, 5000);
        auto br = oracle::cdf_bracket(x, 40);
        EXPECT_TRUE(br.contains(cantor_cdf(x))) << x;
    }
    // x = 1/4 at level 20, as a covering check
    EXPECT_TRUE(oracle::cdf_bracket(Rational(1, 4), 20).contains(Rational(1, 3)));
}

TEST(CantorCdf, Identities) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        Rational x = oracle::random_unit_rational(rng, 100000);
        Rational F = cantor_cdf(x);
        EXPECT_EQ(cantor_cdf(1 - x), 1 - F);
        EXPECT_EQ(cantor_cdf(x / 3), F / 2);
        EXPECT_EQ(cantor_cdf((x + 2) / 3), (1 + F) / 2);
    }
}

TEST(CantorCdf, Nondecreasing) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        Rational a = oracle::random_unit_rational(rng, 10000), b = oracle::random_unit_rational(rng, 10000);
        if (a > b) std::swap(a, b);
        EXPECT_LE(cantor_cdf(a), cantor_cdf(b));
    }
}

TEST(CantorCdf, LongPeriods) {
    // denominators where 3 has a large multiplicative order
    for (long q : {1000003L, 999983L, 1048576L}) {
        for (long p : {1L, 7L, q / 3, q / 2, q - 1}) {
            Rational x(p, q);
            x.canonicalize();
            auto br = oracle::cdf_bracket(x, 60);
            EXPECT_TRUE(br.contains(cantor_cdf(x)));
        }
    }
}

TEST(MeasureUnion, Examples) {
    EXPECT_EQ(measure_union(IntervalUnion::unit()).value(), 1);
    EXPECT_EQ(measure_union(IntervalUnion({Segment::open(Rational(1, 3), Rational(2, 3))})).value(), 0);
    EXPECT_EQ(measure_union(IntervalUnion({Segment::closed(0, Rational(1, 9)),
                                           Segment::closed(Rational(2, 9), Rational(1, 3))}))
                  .value(),
              Rational(1, 2));
    EXPECT_EQ(measure_union(IntervalUnion()).value(), 0);
}

TEST(MeasureUnion, AdditiveAndMonotone) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        std::vector<Rational> pts;
        for (int j = 0; j < 4; ++j) pts.push_back(oracle::random_unit_rational(rng, 1000));
        std::sort(pts.begin(), pts.end());
        Segment a = Segment::closed(pts[0], pts[1]), b = Segment::open(pts[2], pts[3]);
        Rational ma = measure_union(IntervalUnion({a})).value();
        Rational mb = measure_union(IntervalUnion({b})).value();
        Rational mab = measure_union(IntervalUnion({a, b})).value();
        if (pts[1] < pts[2]) EXPECT_EQ(mab, ma + mb);
        Rational big = measure_union(IntervalUnion({Segment::closed(pts[0], pts[3])})).value();
        EXPECT_LE(mab, big);
    }
}

TEST(MeasureValue, RejectsOutOfRange) {
    EXPECT_THROW(MeasureValue(Rational(3, 2)), DomainError);
    EXPECT_THROW(MeasureValue(Rational(-1, 2)), DomainError);
}
