#pragma once

#include <string>

#include "cantor/bigfloat.hpp"
#include "cantor/error.hpp"
#include "cantor/rational.hpp"

namespace cantor {

/// Rational bounds lower <= x <= upper for a (usually irrational) real x.
struct RationalEnclosure {
    Rational lower;
    Rational upper;

    static RationalEnclosure exact(const Rational& q) { return {q, q}; }
    bool is_exact() const { return lower == upper; }
    const Rational& rounded(Rounding r) const { return r == Rounding::Down ? lower : upper; }
    Enclosure to_enclosure(mpfr_prec_t prec) const {
        return {BigFloat::from_rational(lower, prec, Rounding::Down), BigFloat::from_rational(upper, prec, Rounding::Up)};
    }
};

inline constexpr mpfr_prec_t kMinPrecision = 32;
inline constexpr mpfr_prec_t kPrecisionCap = 4096;

/// base^(-exponent) for an integer base >= 1 and rational exponent, with relative
/// width at most 2^-precision. Exact when the power is rational.
inline RationalEnclosure inverse_power(unsigned long base, const Rational& exponent, mpfr_prec_t precision) {
    if (base == 0) throw DomainError("inverse_power: base must be positive");
    if (precision < kMinPrecision) throw DomainError("precision below 32 bits");
    if (base == 1 || exponent == 0) return RationalEnclosure::exact(1);

    const Integer& p = exponent.get_num();
    const Integer& q = exponent.get_den();
    const Integer ap = abs(p);
    if (q.fits_ulong_p() && q.get_ui() <= 4096 && ap.fits_ulong_p() && ap.get_ui() <= 1u << 16) {
        Integer root;
        bool perfect = mpz_root(root.get_mpz_t(), Integer(base).get_mpz_t(), q.get_ui()) != 0;
        if (perfect) {
            Integer r = 1;
            mpz_pow_ui(r.get_mpz_t(), root.get_mpz_t(), ap.get_ui());
            Rational v = p > 0 ? Rational(Integer(1), r) : Rational(r);
            v.canonicalize();
            return RationalEnclosure::exact(v);
        }
    }

    const BigFloat target = BigFloat::pow2(-static_cast<long>(precision), 64);
    for (mpfr_prec_t w = precision + 24; w <= 4 * kPrecisionCap; w *= 2) {
        Enclosure e = Enclosure::exact(Rational(-exponent), w);
        Enclosure v = (Enclosure::log_of(Rational(base), w) * e).exp(w);
        BigFloat rel(64);
        mpfr_div(rel.get(), v.width().get(), v.lo().get(), MPFR_RNDU);
        if (rel <= target) return {v.lower_rational(), v.upper_rational()};
    }
    throw PrecisionCapExceeded("inverse_power: could not reach the requested relative precision");
}

/// The two scales of the argument: sigma_n = n^-tau (fine) and delta_n = n^-alpha (coarse).
struct Schedule {
    Rational tau;
    Rational alpha = Rational(1, 20);
};

struct ScheduleValues {
    RationalEnclosure sigma;
    RationalEnclosure delta;
};

inline ScheduleValues schedule_eval(const Schedule& s, unsigned long n, mpfr_prec_t precision) {
    if (n < 1) throw DomainError("schedule_eval: n must be >= 1");
    if (s.tau < 0) throw DomainError("schedule_eval: tau must be >= 0");
    return {inverse_power(n, s.tau, precision), inverse_power(n, s.alpha, precision)};
}

} // namespace cantor
