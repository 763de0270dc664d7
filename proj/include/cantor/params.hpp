#pragma once

#include <string>
#include <vector>

#include "cantor/bigfloat.hpp"
#include "cantor/error.hpp"
#include "cantor/fourier.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

/// (tau, y, alpha, beta1, beta2, C). Real parameters are held as exact rationals
/// (decimal input such as 1.6 is read as 8/5); gamma is irrational and is only
/// ever used through certified enclosures.
struct ExperimentParams {
    Rational tau = Rational(8, 5);
    Rational y = 0;
    Rational alpha = Rational(1, 20);
    Rational beta1 = Rational(39, 500);
    Rational beta2 = Rational(461, 500);
    Rational C = 1;

    /// Violations, one message per broken rule; empty when valid.
    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (tau < 0) v.emplace_back("tau must be >= 0");
        if (alpha <= 0) v.emplace_back("alpha must be > 0");
        if (!(alpha < beta1)) v.emplace_back("alpha must be < beta1");
        if (C <= 0) v.emplace_back("C must be > 0");
        return v;
    }
    void validate() const {
        auto v = violations();
        if (!v.empty()) throw DomainError("ExperimentParams: " + v.front());
    }

    static Enclosure gamma(mpfr_prec_t precision) { return Enclosure::cantor_dimension(std::max<mpfr_prec_t>(precision, 64)); }

    Schedule schedule() const { return {tau, alpha}; }
    PartitionParams partition() const { return {alpha, beta1, C}; }
};

struct ConstraintResult {
    bool holds = false;
    bool certified = false; // the strict comparison was separated by the enclosures
    Enclosure lhs;          // tau gamma
    Enclosure rhs;          // max{1 - alpha (1 - gamma), beta2 + alpha}
    mpfr_prec_t precision = 0;
};

/// tau gamma > max{1 - alpha (1 - gamma), beta2 + alpha}, decided on certified
/// enclosures with precision doubling up to the cap.
inline ConstraintResult constraint_check(const ExperimentParams& p, mpfr_prec_t precision = 128) {
    ConstraintResult r;
    for (mpfr_prec_t w = std::max<mpfr_prec_t>(precision, 64); w <= kPrecisionCap; w *= 2) {
        const Enclosure g = ExperimentParams::gamma(w);
        const Enclosure one = Enclosure::exact(Rational(1), w);
        r.lhs = Enclosure::exact(p.tau, w) * g;
        r.rhs = Enclosure::max(one - Enclosure::exact(p.alpha, w) * (one - g), Enclosure::exact(Rational(p.beta2 + p.alpha), w));
        r.precision = w;
        if (certainly_greater(r.lhs, r.rhs)) {
            r.holds = true;
            r.certified = true;
            return r;
        }
        if (r.lhs.hi() <= r.rhs.lo()) {
            r.holds = false;
            r.certified = true;
            return r;
        }
    }
    r.holds = false;
    r.certified = false;
    return r;
}

/// Rational bounds on 1/gamma - 0.01, the smallest exponent covered by the null-set result.
inline RationalEnclosure theorem_tau_threshold(mpfr_prec_t precision = 128) {
    const Enclosure g = ExperimentParams::gamma(precision);
    const Enclosure t = Enclosure::exact(Rational(1), precision) / g - Enclosure::exact(Rational(1, 100), precision);
    return {t.lower_rational(), t.upper_rational()};
}

} // namespace cantor
