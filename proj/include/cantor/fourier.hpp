#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cantor/bigfloat.hpp"
#include "cantor/error.hpp"
#include "cantor/parallel.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

/// |mu-hat(k)| with a certified error: the true magnitude lies in
/// [value - error_bound, value + error_bound].
struct FourierMagnitude {
    BigFloat value;
    BigFloat error_bound;

    BigFloat lower() const {
        BigFloat r(value.precision());
        mpfr_sub(r.get(), value.get(), error_bound.get(), MPFR_RNDD);
        if (mpfr_sgn(r.get()) < 0) mpfr_set_zero(r.get(), 1);
        return r;
    }
    /// Clamped to 1, which bounds every Fourier coefficient of a probability measure.
    BigFloat upper() const {
        BigFloat r(value.precision());
        mpfr_add(r.get(), value.get(), error_bound.get(), MPFR_RNDU);
        if (mpfr_cmp_ui(r.get(), 1) > 0) mpfr_set_ui(r.get(), 1, MPFR_RNDN);
        return r;
    }
};

/// Frequency t * 2^n kept in factored form.
struct FourierQuery {
    Integer t = 1;
    unsigned long n = 0;
    mpfr_prec_t precision = 64;
};

namespace detail {

/// Evaluates |mu-hat(k)| = prod_{j>=1} |cos(2 pi k / 3^j)|.
///
/// The product comes from mu being the law of sum d_j 3^-j with independent d_j
/// uniform on {0, 2}: E e(-k d_j 3^-j) = e(-k 3^-j) cos(2 pi k 3^-j). Only k mod 3^j
/// enters factor j, so `residue(j)` supplies it and the caller never needs k itself.
///
/// Error budget (target 2^-p):
///   * head, j <= J: each factor is computed at w bits with |error| <= 21 * 2^-w
///     (argument 2 pi r/3^j from three correctly rounded ops, cos 1-Lipschitz, one
///     rounding of cos), and each product step adds 2^-w; factors lie in [0,1], so
///     the head error is at most 32 J 2^-w <= 2^-(p+1).
///   * tail, j > J: with z_j = 2 pi |k| 3^-j <= 1, |log|cos z|| <= z^2, so the tail
///     factor lies in [exp(-T), 1], T = (2 pi k)^2 9^-J / 8, and the magnitude moves
///     by at most T <= 2^-(p+1).
template <typename Residue>
FourierMagnitude product_magnitude(unsigned long log2_k_ceiling, unsigned long J, mpfr_prec_t precision,
                                   Residue&& residue) {
    const auto w = static_cast<mpfr_prec_t>(precision + 2 + std::ceil(std::log2(32.0 * static_cast<double>(J + 1))));
    BigFloat pi(w), prod(w), theta(w), c(w), frac(w);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_mul_2ui(pi.get(), pi.get(), 1, MPFR_RNDN); // 2 pi
    mpfr_set_ui(prod.get(), 1, MPFR_RNDN);

    Integer power = 1;
    Rational f;
    for (unsigned long j = 1; j <= J; ++j) {
        power *= 3;
        Integer r = residue(j, power);
        if (r == 0) continue; // factor cos(0) = 1
        f = Rational(r, power);
        f.canonicalize();
        mpfr_set_q(frac.get(), f.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(theta.get(), pi.get(), frac.get(), MPFR_RNDN);
        mpfr_cos(c.get(), theta.get(), MPFR_RNDN);
        mpfr_abs(c.get(), c.get(), MPFR_RNDN);
        mpfr_mul(prod.get(), prod.get(), c.get(), MPFR_RNDN);
    }

    // head: 32 J 2^-w ; tail: T <= 2^(2 log2|k| + log2(5) - 3.1699 J) with (2pi)^2/8 < 5
    BigFloat err(64), tail(64);
    mpfr_set_ui_2exp(err.get(), 32 * (J + 1), -static_cast<long>(w), MPFR_RNDU);
    double tail_exp = 2.0 * static_cast<double>(log2_k_ceiling) + 2.33 - 3.1699 * static_cast<double>(J);
    mpfr_set_ui_2exp(tail.get(), 1, static_cast<long>(std::ceil(tail_exp)), MPFR_RNDU);
    mpfr_add(err.get(), err.get(), tail.get(), MPFR_RNDU);
    return {std::move(prod), std::move(err)};
}

/// Truncation depth: ceil(log_3 |k|) + ceil(p / log_2 3) + 2 guard factors.
inline unsigned long truncation_depth(unsigned long log2_k_ceiling, mpfr_prec_t precision) {
    const double log2_3 = std::log2(3.0);
    return static_cast<unsigned long>(std::ceil(static_cast<double>(log2_k_ceiling) / log2_3)) +
           static_cast<unsigned long>(std::ceil(static_cast<double>(precision) / log2_3)) + 2;
}

inline unsigned long log2_ceiling(const Integer& k) {
    Integer a = abs(k);
    if (a <= 1) return 1;
    return static_cast<unsigned long>(mpz_sizeinbase(a.get_mpz_t(), 2)) + 1;
}

inline void check_precision(mpfr_prec_t precision) {
    if (precision < kMinPrecision) throw DomainError("precision must be at least 32 bits");
}

} // namespace detail

/// |mu-hat(k)| for a plain integer frequency, certified to within 2^-precision.
inline FourierMagnitude mu_hat_magnitude(const Integer& k, mpfr_prec_t precision) {
    detail::check_precision(precision);
    if (k == 0) return {BigFloat::from_rational(Rational(1), precision, Rounding::Nearest), BigFloat(precision)};
    const Integer a = abs(k);
    const unsigned long lk = detail::log2_ceiling(a);
    const unsigned long J = detail::truncation_depth(lk, precision);
    return detail::product_magnitude(lk, J, precision, [&](unsigned long, const Integer& p3j) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p3j.get_mpz_t());
        return r;
    });
}

inline FourierMagnitude mu_hat_magnitude(long k, mpfr_prec_t precision) {
    return mu_hat_magnitude(Integer(k), precision);
}

/// |mu-hat(t 2^n)| without forming t 2^n: factor j uses t (2^n mod 3^j) mod 3^j, and
/// 2^n mod 3^j is read off a single modular exponentiation 2^n mod 3^J.
inline FourierMagnitude mu_hat_scaled(const FourierQuery& q) {
    detail::check_precision(q.precision);
    if (q.t == 0) throw DomainError("mu_hat_scaled: t must be nonzero");
    const Integer t = abs(q.t);
    const unsigned long lk = detail::log2_ceiling(t) + q.n;
    const unsigned long J = detail::truncation_depth(lk, q.precision);
    const Integer mod_J = pow3(J);
    Integer two_n_mod;
    mpz_powm_ui(two_n_mod.get_mpz_t(), Integer(2).get_mpz_t(), q.n, mod_J.get_mpz_t());
    return detail::product_magnitude(lk, J, q.precision, [&](unsigned long, const Integer& p3j) {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), two_n_mod.get_mpz_t(), p3j.get_mpz_t());
        r *= t;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), p3j.get_mpz_t());
        return r;
    });
}

enum class Classification { Good, Bad, Boundary };

inline const char* to_string(Classification c) {
    switch (c) {
    case Classification::Good: return "good";
    case Classification::Bad: return "bad";
    default: return "boundary";
    }
}

/// Verdict for one exponent n of the block [N, 2N].
struct ExponentClass {
    unsigned long n = 0;
    Classification status = Classification::Bad;
    BigFloat max_lower;        // certified lower bound of max_t |mu-hat(t 2^n)|
    BigFloat max_upper;        // certified upper bound
    mpfr_prec_t precision = 0; // precision at which the verdict was reached
};

/// G_N / B_N split of [N, 2N]. Boundary exponents (unresolved at the precision cap)
/// are counted as bad.
struct GoodBadPartition {
    unsigned long N = 0;
    std::vector<unsigned long> good;
    std::vector<unsigned long> bad;
    std::vector<unsigned long> boundary; // subset of bad
    Enclosure threshold;                 // C N^-beta1
    Integer t_range;                     // floor(2 / delta_2N)
    std::vector<ExponentClass> details;  // sorted by n
};

struct PartitionParams {
    Rational alpha = Rational(1, 20);
    Rational beta1 = Rational(39, 500);
    Rational C = 1;
};

/// floor(2 / delta_m) = floor(2 m^alpha), exact. Integer values of 2 m^alpha are
/// detected exactly (m^a = (v/2)^b for alpha = a/b); otherwise the enclosure is
/// refined until it does not straddle an integer.
inline Integer t_range_for(unsigned long m, const Rational& alpha) {
    if (alpha <= 0) throw DomainError("t_range_for: alpha must be positive");
    for (mpfr_prec_t w = 64; w <= 8 * kPrecisionCap; w *= 2) {
        RationalEnclosure inv = inverse_power(m, alpha, w); // m^-alpha
        Rational lo = Rational(2) / inv.upper;
        Rational hi = Rational(2) / inv.lower;
        Integer flo = floor_of(lo);
        Integer fhi = floor_of(hi);
        if (flo == fhi) return flo;
        // straddles fhi: is 2 m^alpha == fhi exactly?
        const Integer& a = alpha.get_num();
        const Integer& b = alpha.get_den();
        if (a.fits_ulong_p() && b.fits_ulong_p() && a.get_ui() <= 4096 && b.get_ui() <= 4096) {
            Integer lhs, rhs, v = fhi;
            // (2 m^alpha)^b == v^b  <=>  2^b m^a == v^b
            mpz_ui_pow_ui(lhs.get_mpz_t(), m, a.get_ui());
            lhs <<= b.get_ui();
            mpz_pow_ui(rhs.get_mpz_t(), v.get_mpz_t(), b.get_ui());
            if (lhs == rhs) return fhi;
        }
    }
    throw PrecisionCapExceeded("t_range_for: could not resolve floor(2 m^alpha)");
}

/// Largest |mu-hat(t 2^n)| over 1 <= t <= t_max, as a certified pair (lower, upper).
/// Negative t are covered by |mu-hat(-k)| = |mu-hat(k)|.
inline std::pair<BigFloat, BigFloat> max_scaled_magnitude(unsigned long n, const Integer& t_max,
                                                          mpfr_prec_t precision) {
    BigFloat lo(precision), hi(precision);
    for (Integer t = 1; t <= t_max; ++t) {
        FourierMagnitude m = mu_hat_scaled({t, n, precision});
        BigFloat l = m.lower(), u = m.upper();
        if (t == 1 || l > lo) lo = l;
        if (t == 1 || u > hi) hi = u;
    }
    return {std::move(lo), std::move(hi)};
}

/// Splits [N, 2N] into exponents where max_{1<=|t|<=2/delta_2N} |mu-hat(t 2^n)| <= C N^-beta1
/// (good) and the rest (bad). Close calls are re-run at doubled precision up to 4096 bits;
/// anything still unresolved is flagged boundary and treated as bad.
inline GoodBadPartition classify_good_bad(unsigned long N, const PartitionParams& params, mpfr_prec_t precision,
                                          unsigned threads = 1) {
    if (N < 1) throw DomainError("classify_good_bad: N must be >= 1");
    detail::check_precision(precision);
    if (params.C <= 0) throw DomainError("classify_good_bad: C must be positive");

    GoodBadPartition out;
    out.N = N;
    out.t_range = t_range_for(2 * N, params.alpha);

    auto threshold_at = [&](mpfr_prec_t p) {
        RationalEnclosure nb = inverse_power(N, params.beta1, p + 8);
        return Enclosure::exact(params.C, p + 8) * nb.to_enclosure(p + 8);
    };
    out.threshold = threshold_at(precision);

    const unsigned long count = N + 1;
    std::vector<ExponentClass> details(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const unsigned long n = N + static_cast<unsigned long>(i);
        ExponentClass ec;
        ec.n = n;
        ec.status = Classification::Boundary;
        for (mpfr_prec_t p = precision; p <= kPrecisionCap; p *= 2) {
            Enclosure thr = threshold_at(p);
            auto [lo, hi] = max_scaled_magnitude(n, out.t_range, p);
            ec.max_lower = lo;
            ec.max_upper = hi;
            ec.precision = p;
            if (hi <= thr.lo()) {
                ec.status = Classification::Good;
                break;
            }
            if (lo > thr.hi()) {
                ec.status = Classification::Bad;
                break;
            }
        }
        details[i] = std::move(ec);
    });

    for (const auto& ec : details) {
        if (ec.status == Classification::Good) {
            out.good.push_back(ec.n);
        } else {
            out.bad.push_back(ec.n);
            if (ec.status == Classification::Boundary) out.boundary.push_back(ec.n);
        }
    }
    out.details = std::move(details);
    return out;
}

} // namespace cantor
