#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>

#include "cantor/error.hpp"
#include "cantor/rational.hpp"

namespace cantor {

enum class Rounding { Down, Up, Nearest };

inline mpfr_rnd_t to_mpfr(Rounding r) {
    switch (r) {
    case Rounding::Down: return MPFR_RNDD;
    case Rounding::Up: return MPFR_RNDU;
    default: return MPFR_RNDN;
    }
}

/// Owning handle for an mpfr_t. Value type: copies carry the precision along.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_rational(const Rational& q, mpfr_prec_t prec, Rounding r) {
        BigFloat b(prec);
        mpfr_set_q(b.v_, q.get_mpq_t(), to_mpfr(r));
        return b;
    }
    static BigFloat from_double(double d, mpfr_prec_t prec) {
        BigFloat b(prec);
        mpfr_set_d(b.v_, d, MPFR_RNDN);
        return b;
    }
    /// 2^e exactly.
    static BigFloat pow2(long e, mpfr_prec_t prec) {
        BigFloat b(prec);
        mpfr_set_ui_2exp(b.v_, 1, e, MPFR_RNDN);
        return b;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Exact value as a rational (every finite binary float is one).
    Rational to_rational() const {
        if (!mpfr_number_p(v_)) throw ComputationError("non-finite float has no rational value");
        if (mpfr_zero_p(v_)) return Rational(0);
        Integer m;
        mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
        Rational q(m);
        if (e >= 0) {
            mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
        } else {
            mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
        }
        return q;
    }

    /// Decimal rendering with the given number of significant digits.
    std::string to_decimal(int digits = 30) const {
        int n = mpfr_snprintf(nullptr, 0, "%.*Rg", digits, v_);
        std::string out(static_cast<std::size_t>(n) + 1, '\0');
        mpfr_snprintf(out.data(), out.size(), "%.*Rg", digits, v_);
        out.resize(static_cast<std::size_t>(n));
        return out;
    }

    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }

private:
    mpfr_t v_;
};

/// Decimal rendering of an exact rational, correctly rounded to `digits` significant digits.
inline std::string rational_decimal(const Rational& q, int digits = 30) {
    auto prec = static_cast<mpfr_prec_t>(digits * 3.33) + 16;
    return BigFloat::from_rational(q, prec, Rounding::Nearest).to_decimal(digits);
}

/// Certified enclosure [lo, hi] of a real number. Every operation rounds the lower
/// end down and the upper end up, so the true value stays inside.
class Enclosure {
public:
    Enclosure() : lo_(64), hi_(64) {}
    Enclosure(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

    static Enclosure exact(const Rational& q, mpfr_prec_t prec) {
        return {BigFloat::from_rational(q, prec, Rounding::Down), BigFloat::from_rational(q, prec, Rounding::Up)};
    }
    static Enclosure pi(mpfr_prec_t prec) {
        BigFloat lo(prec), hi(prec);
        mpfr_const_pi(lo.get(), MPFR_RNDD);
        mpfr_const_pi(hi.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }
    static Enclosure log_of(const Rational& q, mpfr_prec_t prec) {
        if (q <= 0) throw DomainError("log of a non-positive number");
        return exact(q, prec + 8).log(prec);
    }
    /// log 2 / log 3, the Hausdorff dimension of the middle-third Cantor set.
    static Enclosure cantor_dimension(mpfr_prec_t prec) {
        BigFloat l2lo(prec + 8), l2hi(prec + 8), l3lo(prec + 8), l3hi(prec + 8);
        mpfr_const_log2(l2lo.get(), MPFR_RNDD);
        mpfr_const_log2(l2hi.get(), MPFR_RNDU);
        BigFloat three = BigFloat::from_rational(Rational(3), prec + 8, Rounding::Nearest);
        mpfr_log(l3lo.get(), three.get(), MPFR_RNDD);
        mpfr_log(l3hi.get(), three.get(), MPFR_RNDU);
        BigFloat lo(prec), hi(prec);
        mpfr_div(lo.get(), l2lo.get(), l3hi.get(), MPFR_RNDD);
        mpfr_div(hi.get(), l2hi.get(), l3lo.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }

    const BigFloat& lo() const { return lo_; }
    const BigFloat& hi() const { return hi_; }
    mpfr_prec_t precision() const { return std::max(lo_.precision(), hi_.precision()); }

    Rational lower_rational() const { return lo_.to_rational(); }
    Rational upper_rational() const { return hi_.to_rational(); }

    BigFloat midpoint() const {
        BigFloat m(precision() + 1);
        mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return m;
    }
    BigFloat width() const {
        BigFloat w(precision());
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }
    std::string to_decimal(int digits = 30) const { return midpoint().to_decimal(digits); }

    bool contains(const Rational& q) const {
        return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
    }
    bool positive() const { return mpfr_sgn(lo_.get()) > 0; }

    /// Certified strict comparisons; both false means the enclosures overlap.
    friend bool certainly_less(const Enclosure& a, const Enclosure& b) { return a.hi_ < b.lo_; }
    friend bool certainly_greater(const Enclosure& a, const Enclosure& b) { return a.lo_ > b.hi_; }

    friend Enclosure operator+(const Enclosure& a, const Enclosure& b) {
        auto p = std::max(a.precision(), b.precision());
        BigFloat lo(p), hi(p);
        mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }
    friend Enclosure operator-(const Enclosure& a, const Enclosure& b) {
        auto p = std::max(a.precision(), b.precision());
        BigFloat lo(p), hi(p);
        mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }
    friend Enclosure operator*(const Enclosure& a, const Enclosure& b) {
        auto p = std::max(a.precision(), b.precision());
        BigFloat lo(p), hi(p), t(p);
        bool first = true;
        for (const BigFloat* x : {&a.lo_, &a.hi_}) {
            for (const BigFloat* y : {&b.lo_, &b.hi_}) {
                mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
                if (first || t < lo) lo = t;
                mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
                if (first || t > hi) hi = t;
                first = false;
            }
        }
        return {std::move(lo), std::move(hi)};
    }
    friend Enclosure operator/(const Enclosure& a, const Enclosure& b) {
        if (mpfr_sgn(b.lo_.get()) <= 0 && mpfr_sgn(b.hi_.get()) >= 0) {
            throw ComputationError("division by an enclosure containing zero");
        }
        auto p = std::max(a.precision(), b.precision());
        BigFloat lo(p), hi(p), t(p);
        bool first = true;
        for (const BigFloat* x : {&a.lo_, &a.hi_}) {
            for (const BigFloat* y : {&b.lo_, &b.hi_}) {
                mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
                if (first || t < lo) lo = t;
                mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
                if (first || t > hi) hi = t;
                first = false;
            }
        }
        return {std::move(lo), std::move(hi)};
    }

    Enclosure log(mpfr_prec_t prec) const {
        if (mpfr_sgn(lo_.get()) <= 0) throw ComputationError("log of an enclosure reaching zero");
        BigFloat lo(prec), hi(prec);
        mpfr_log(lo.get(), lo_.get(), MPFR_RNDD);
        mpfr_log(hi.get(), hi_.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }
    Enclosure exp(mpfr_prec_t prec) const {
        BigFloat lo(prec), hi(prec);
        mpfr_exp(lo.get(), lo_.get(), MPFR_RNDD);
        mpfr_exp(hi.get(), hi_.get(), MPFR_RNDU);
        return {std::move(lo), std::move(hi)};
    }
    /// this^e for a positive base.
    Enclosure pow(const Enclosure& e, mpfr_prec_t prec) const { return (log(prec + 16) * e).exp(prec); }

    static Enclosure max(const Enclosure& a, const Enclosure& b) {
        return {a.lo_ > b.lo_ ? a.lo_ : b.lo_, a.hi_ > b.hi_ ? a.hi_ : b.hi_};
    }

private:
    BigFloat lo_;
    BigFloat hi_;
};

} // namespace cantor
