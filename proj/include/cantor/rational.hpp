#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "cantor/error.hpp"

namespace cantor {

using Integer = mpz_class;

/// Exact rational in lowest terms with positive denominator. gmpxx keeps the
/// canonical form for every arithmetic result; the helpers below canonicalize
/// anything built from raw parts.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) {
        throw DomainError("rational with zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer pow_int(unsigned long base, unsigned long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline Integer pow2(unsigned long exp) {
    Integer r = 1;
    r <<= exp;
    return r;
}

inline Integer pow3(unsigned long exp) { return pow_int(3, exp); }

inline Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

/// x - floor(x), in [0, 1).
inline Rational frac_of(const Rational& q) { return q - Rational(floor_of(q)); }

/// Distance to the nearest integer.
inline Rational dist_to_int(const Rational& q) {
    Rational f = frac_of(q);
    Rational g = 1 - f;
    return f < g ? f : g;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Lossless "p/q" form; the denominator is always written, so 1 renders as "1/1".
inline std::string to_fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

inline Integer parse_signed_integer(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw DomainError("not an integer");
    Integer v(std::string(s), 10);
    return neg ? Integer(-v) : v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Parses "p/q", integers, and decimals with optional exponent ("0.05", "-1.6e-3")
/// into an exact rational. Decimal input is taken at face value: "0.05" is 1/20.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = detail::trim(text);
    if (s.empty()) throw DomainError("empty number");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_signed_integer(detail::trim(s.substr(0, slash)));
        std::string_view den_s = detail::trim(s.substr(slash + 1));
        if (!detail::all_digits(den_s)) throw DomainError("bad denominator in '" + std::string(text) + "'");
        Integer den(std::string(den_s), 10);
        if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        return make_rational(num, den);
    }

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        Integer ev;
        try {
            ev = detail::parse_signed_integer(es);
        } catch (const DomainError&) {
            throw DomainError("bad exponent in '" + std::string(text) + "'");
        }
        if (!ev.fits_slong_p() || abs(ev) > 100000) throw DomainError("exponent out of range in '" + std::string(text) + "'");
        exp10 = ev.get_si();
        s = s.substr(0, e);
    }
    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw DomainError("not a number: '" + std::string(text) + "'");
    if ((!int_part.empty() && !detail::all_digits(int_part)) ||
        (!frac_part.empty() && !detail::all_digits(frac_part))) {
        throw DomainError("not a number: '" + std::string(text) + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    Integer mantissa(digits, 10);
    long scale = exp10 - static_cast<long>(frac_part.size());
    Rational q(mantissa);
    if (scale >= 0) {
        q *= Rational(pow_int(10, static_cast<unsigned long>(scale)));
    } else {
        q /= Rational(pow_int(10, static_cast<unsigned long>(-scale)));
    }
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

} // namespace cantor
