#include <gtest/gtest.h>

#include <cmath>

#include "cantor/cdf.hpp"
#include "cantor/sampler.hpp"
#include "cantor/targets.hpp"
#include "../pinned.hpp"

using namespace cantor;

TEST(MuSample, DigitsAndDeterminism) {
    MuSample a = sample_mu(99, 200), b = sample_mu(99, 200), c = sample_mu(100, 200);
    EXPECT_EQ(a.digits(), b.digits());
    EXPECT_NE(a.digits(), c.digits());
    for (auto d : a.digits()) EXPECT_TRUE(d == 0 || d == 2);
    MuSample longer = sample_mu(99, 500);
    EXPECT_TRUE(std::equal(a.digits().begin(), a.digits().end(), longer.digits().begin()));
    EXPECT_THROW(sample_mu(1, 0), DomainError);
    EXPECT_THROW(MuSample(std::vector<std::uint8_t>{0, 1}), DomainError);
}

TEST(MuSample, MeanAndCdfAtOneThird) {
    const int S = 100000;
    double sum = 0, sumsq = 0;
    int below = 0;
    for (int i = 0; i < S; ++i) {
        MuSample s(5, static_cast<std::uint64_t>(i), 40);
        double x = s.value().get_d();
        sum += x;
        sumsq += x * x;
        if (s.value() <= Rational(1, 3)) ++below;
    }
    double mean = sum / S, var = sumsq / S - mean * mean;
    EXPECT_LT(std::fabs(mean - 0.5), 3 * std::sqrt(var / S));
    double f = static_cast<double>(below) / S;
    double target = cantor_cdf(Rational(1, 3)).get_d();
    EXPECT_LT(std::fabs(f - target), 3 * std::sqrt(target * (1 - target) / S));
}

TEST(HitTest, ZeroPoint) {
    MuSample zero(std::vector<std::uint8_t>(80, 0));
    for (unsigned long n = 1; n <= 30; ++n) {
        EXPECT_EQ(hit_test(zero, n, 0, Rational(1, 1000000)), HitResult::Hit);
        EXPECT_EQ(hit_test(zero, n, 0, Rational(0)), HitResult::Miss);
    }
}

TEST(HitTest, TwoThirds) {
    // x = 2/3 = 0.2000..._3 as a truncation; the true point 2/3 has ||2^n x|| = 1/3
    std::vector<std::uint8_t> d(90, 0);
    d[0] = 2;
    MuSample s(d);
    for (unsigned long n = 1; n <= 20; ++n) {
        EXPECT_EQ(hit_test(s, n, 0, Rational(1, 3) + Rational(1, 1000)), HitResult::Hit);
        EXPECT_EQ(hit_test(s, n, 0, Rational(1, 3) - Rational(1, 1000)), HitResult::Miss);
    }
}

TEST(HitTest, UndecidedThenResolved) {
    // threshold equal to the truncated distance with a short expansion
    MuSample s = sample_mu(3, 12);
    const unsigned long n = 10;
    Rational x = s.value();
    Rational dist = dist_to_int(Rational(x * Rational(pow2(n))));
    EXPECT_EQ(hit_test(s, n, 0, dist), HitResult::Undecided);
    HitResult r = hit_test_resolving(s, n, 0, RationalEnclosure::exact(dist));
    EXPECT_NE(r, HitResult::Undecided);
    EXPECT_GT(s.depth(), 12u);
}

TEST(HitTest, DecisionsStableUnderDepth) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        MuSample s = sample_mu(seed, 30);
        const Rational psi(1, 37);
        HitResult first = hit_test(s, 8, Rational(1, 3), psi);
        for (std::size_t L : {60u, 120u, 400u}) {
            MuSample t = s;
            t.extend(L);
            HitResult r = hit_test(t, 8, Rational(1, 3), psi);
            if (first != HitResult::Undecided) {
                EXPECT_EQ(r, first);
            } else {
                first = r;
            }
        }
    }
}

TEST(Survival, ConstantOneAlwaysHits) {
    SurvivalParams p;
    p.psi = ApproxFunction::power_law(0);
    p.n_min = 3;
    p.n_max = 9;
    p.samples = 500;
    SurvivalResult r = survival_curve(p);
    EXPECT_EQ(r.survivors, 500u);
    EXPECT_DOUBLE_EQ(r.survival_fraction(), 1.0);
}

TEST(Survival, FrequencyMatchesExactMeasure) {
    SurvivalParams p;
    p.psi = ApproxFunction::table({0, 0, 0, Rational(1, 32)});
    p.n_min = 4;
    p.n_max = 4;
    p.samples = 1000000;
    p.seed = 2024;
    SurvivalResult r = survival_curve(p);
    double exact = measure_target({4, 0, Rational(1, 32)}).value().get_d();
    const auto& e = r.per_n[0];
    double se = std::sqrt(exact * (1 - exact) / static_cast<double>(p.samples));
    EXPECT_LT(std::fabs(e.frequency(p.samples) - exact), 3 * se);
}

TEST(Survival, ThreadCountIndependent) {
    SurvivalParams p;
    p.psi = ApproxFunction::power_law(Rational(1, 2));
    p.n_min = 5;
    p.n_max = 25;
    p.samples = 3000;
    p.seed = 77;
    p.threads = 1;
    SurvivalResult a = survival_curve(p);
    p.threads = 4;
    SurvivalResult b = survival_curve(p);
    EXPECT_EQ(a.survivors, b.survivors);
    for (std::size_t i = 0; i < a.per_n.size(); ++i) EXPECT_EQ(a.per_n[i].hits, b.per_n[i].hits);
}

TEST(Survival, FasterDecayFewerSurvivors) {
    SurvivalParams p;
    p.n_min = 10;
    p.n_max = 40;
    p.samples = 100000;
    p.seed = 1;
    p.psi = ApproxFunction::power_law(2);
    SurvivalResult steep = survival_curve(p);
    p.psi = ApproxFunction::power_law(Rational(1, 2));
    SurvivalResult shallow = survival_curve(p);
    EXPECT_LT(steep.survival_fraction(), shallow.survival_fraction());
    EXPECT_EQ(steep.survivors, kPinnedSurvivorsTau2);
    EXPECT_EQ(shallow.survivors, kPinnedSurvivorsTauHalf);
}

TEST(Survival, Errors) {
    SurvivalParams p;
    p.n_min = 5;
    p.n_max = 4;
    EXPECT_THROW(survival_curve(p), DomainError);
    EXPECT_THROW(ApproxFunction::power_law(-1), DomainError);
    EXPECT_THROW(ApproxFunction::table({Rational(-1, 2)}), DomainError);
}
