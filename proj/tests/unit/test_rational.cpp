#include <gtest/gtest.h>

#include <cmath>

#include "cantor/bigfloat.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

using namespace cantor;

TEST(ParseRational, FractionsIntegersDecimals) {
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational(" -6/8 "), Rational(-3, 4));
    EXPECT_EQ(parse_rational("7"), Rational(7));
    EXPECT_EQ(parse_rational("1.6"), Rational(8, 5));
    EXPECT_EQ(parse_rational("0.078"), Rational(39, 500));
    EXPECT_EQ(parse_rational("-.5"), Rational(-1, 2));
    EXPECT_EQ(parse_rational("2.5e-3"), Rational(1, 400));
    EXPECT_EQ(parse_rational("1E2"), Rational(100));
}

TEST(ParseRational, RejectsGarbage) {
    for (const char* bad : {"", "abc", "1/0", "1/-2", "1.2.3", "e5", "1e", "--1", "1/2/3", "0x10"}) {
        EXPECT_THROW(parse_rational(bad), DomainError) << bad;
    }
}

TEST(FractionString, AlwaysPOverQ) {
    EXPECT_EQ(to_fraction_string(Rational(1)), "1/1");
    EXPECT_EQ(to_fraction_string(Rational(0)), "0/1");
    EXPECT_EQ(to_fraction_string(make_rational(-2, 6)), "-1/3");
    EXPECT_EQ(parse_rational(to_fraction_string(Rational(22, 7))), Rational(22, 7));
}

TEST(IntegerHelpers, FloorCeilFrac) {
    EXPECT_EQ(floor_of(Rational(-1, 2)), -1);
    EXPECT_EQ(ceil_of(Rational(-1, 2)), 0);
    EXPECT_EQ(floor_of(Rational(7, 2)), 3);
    EXPECT_EQ(ceil_of(Rational(7, 2)), 4);
    EXPECT_EQ(frac_of(Rational(-1, 4)), Rational(3, 4));
    EXPECT_EQ(dist_to_int(Rational(7, 4)), Rational(1, 4));
    EXPECT_EQ(dist_to_int(Rational(-3, 5)), Rational(2, 5));
    EXPECT_EQ(pow3(4), 81);
    EXPECT_EQ(pow2(70), Integer("1180591620717411303424"));
}

TEST(Enclosure, ContainsExactInputs) {
    for (Rational q : {Rational(1, 3), Rational(-22, 7), Rational(1, 1024)}) {
        Enclosure e = Enclosure::exact(q, 64);
        EXPECT_TRUE(e.contains(q));
        EXPECT_LE(e.lower_rational(), q);
        EXPECT_GE(e.upper_rational(), q);
    }
    EXPECT_TRUE(Enclosure::exact(Rational(1, 2), 64).lower_rational() == Rational(1, 2));
}

TEST(Enclosure, ArithmeticKeepsTruth) {
    const mpfr_prec_t p = 80;
    Enclosure a = Enclosure::exact(Rational(1, 3), p), b = Enclosure::exact(Rational(2, 7), p);
    EXPECT_TRUE((a + b).contains(Rational(13, 21)));
    EXPECT_TRUE((a - b).contains(Rational(1, 21)));
    EXPECT_TRUE((a * b).contains(Rational(2, 21)));
    EXPECT_TRUE((a / b).contains(Rational(7, 6)));
    EXPECT_THROW(a / (b - b), ComputationError);
}

TEST(Enclosure, GammaMatchesReference) {
    Enclosure g = Enclosure::cantor_dimension(200);
    // log 2 / log 3 = 0.63092975357145743709952711434276...
    EXPECT_LT(g.lower_rational(), parse_rational("0.63092975357145743709952711434277"));
    EXPECT_GT(g.upper_rational(), parse_rational("0.63092975357145743709952711434275"));
    EXPECT_LT(Rational(g.upper_rational() - g.lower_rational()), Rational(1, Integer(1) << 190));
}

TEST(Enclosure, CertainComparisons) {
    Enclosure a = Enclosure::exact(Rational(1, 3), 64), b = Enclosure::exact(Rational(1, 2), 64);
    EXPECT_TRUE(certainly_less(a, b));
    EXPECT_TRUE(certainly_greater(b, a));
    EXPECT_FALSE(certainly_less(a, a));
}

TEST(InversePower, ExactCases) {
    EXPECT_TRUE(inverse_power(10, Rational(2), 64).is_exact());
    EXPECT_EQ(inverse_power(10, Rational(2), 64).lower, Rational(1, 100));
    EXPECT_EQ(inverse_power(7, Rational(0), 64).lower, Rational(1));
    EXPECT_EQ(inverse_power(1, Rational(8, 5), 64).lower, Rational(1));
    // 16^(1/4) = 2
    EXPECT_EQ(inverse_power(16, Rational(1, 4), 64).upper, Rational(1, 2));
}

TEST(InversePower, EnclosureIsTightAndCorrect) {
    // 1024^-0.05 = 2^-1/2
    RationalEnclosure d = inverse_power(1024, Rational(1, 20), 128);
    EXPECT_LE(Rational(d.lower * d.lower), Rational(1, 2));
    EXPECT_GE(Rational(d.upper * d.upper), Rational(1, 2));
    EXPECT_LE(Rational((d.upper - d.lower) / d.lower), Rational(1, Integer(1) << 128));
    EXPECT_NEAR(d.lower.get_d(), 0.70710678118654752, 1e-15);

    RationalEnclosure s = inverse_power(37, Rational(8, 5), 64);
    EXPECT_LT(s.lower, s.upper);
    EXPECT_NEAR(s.upper.get_d(), std::pow(37.0, -1.6), 1e-15);
}

TEST(Schedule, SigmaBelowDelta) {
    for (unsigned long n : {1ul, 2ul, 17ul, 1000ul}) {
        ScheduleValues v = schedule_eval({Rational(8, 5), Rational(1, 20)}, n, 64);
        EXPECT_LE(v.sigma.upper, v.delta.upper);
        EXPECT_LE(v.sigma.lower, v.sigma.upper);
    }
    EXPECT_THROW(schedule_eval({Rational(1)}, 0, 64), DomainError);
    EXPECT_THROW(schedule_eval({Rational(1)}, 3, 8), DomainError);
}
