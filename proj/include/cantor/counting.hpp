#pragma once

#include <array>
#include <string>

#include "cantor/error.hpp"
#include "cantor/interval_union.hpp"
#include "cantor/rational.hpp"

namespace cantor {

/// Level N of the Cantor construction: K_N is 2^N closed intervals of length 3^-N.
/// L_N holds their left ends a/3^N (a < 3^N with ternary digits in {0,2}),
/// R_N = 1 - L_N the right ends, and C_N = L_N u R_N.
struct CantorLevel {
    unsigned long N = 0;

    Integer interval_count() const { return pow2(N); }
    Rational interval_length() const { return Rational(Integer(1), pow3(N)); }
    Integer endpoint_count() const { return N == 0 ? Integer(2) : pow2(N + 1); }
};

namespace detail {

/// Base-3 digits of v (0 <= v < 3^N), most significant first, padded to N places.
inline std::string ternary_digits(const Integer& v, unsigned long N) {
    std::string s = v == 0 ? std::string() : v.get_str(3);
    if (s.size() < N) s.insert(0, N - s.size(), '0');
    return s;
}

} // namespace detail

/// Number of a in [lo_int, hi_int] with 0 <= a < 3^N and every ternary digit in {0,2}.
/// Most-significant-digit-first DP over (tight-low, tight-high) states; O(N) per query.
inline Integer count_restricted_integers(unsigned long N, Integer lo_int, Integer hi_int) {
    if (lo_int < 0) lo_int = 0;
    Integer top = pow3(N) - 1;
    if (hi_int > top) hi_int = top;
    if (lo_int > hi_int) return 0;

    const std::string lo_d = detail::ternary_digits(lo_int, N);
    const std::string hi_d = detail::ternary_digits(hi_int, N);

    // state index: (tight_lo << 1) | tight_hi
    std::array<Integer, 4> ways{0, 0, 0, 1};
    for (unsigned long i = 0; i < N; ++i) {
        const int ld = lo_d[i] - '0';
        const int hd = hi_d[i] - '0';
        std::array<Integer, 4> next{0, 0, 0, 0};
        for (int st = 0; st < 4; ++st) {
            if (ways[st] == 0) continue;
            const bool tl = st & 2;
            const bool th = st & 1;
            for (int d : {0, 2}) {
                if (tl && d < ld) continue;
                if (th && d > hd) continue;
                const int ns = ((tl && d == ld) ? 2 : 0) | ((th && d == hd) ? 1 : 0);
                next[ns] += ways[st];
            }
        }
        ways = std::move(next);
    }
    return ways[0] + ways[1] + ways[2] + ways[3];
}

/// #{ a : 0 <= a < 3^N, ternary digits of a in {0,2}, a/3^N in the given interval }.
/// Strict or non-strict at each end as requested; a lower end below 0 is allowed and clipped.
inline Integer count_restricted(unsigned long N, const Rational& lo, const Rational& hi, bool lo_open = false,
                                bool hi_open = false) {
    if (lo > hi) throw DomainError("count_restricted: lo > hi");
    const Rational scale(pow3(N));
    const Rational lo_s = lo * scale;
    const Rational hi_s = hi * scale;
    Integer a_min = lo_open ? Integer(floor_of(lo_s) + 1) : ceil_of(lo_s);
    Integer a_max = hi_open ? Integer(ceil_of(hi_s) - 1) : floor_of(hi_s);
    return count_restricted_integers(N, std::move(a_min), std::move(a_max));
}

inline Integer count_restricted(unsigned long N, const Segment& s) {
    return count_restricted(N, s.lo, s.hi, s.lo_open, s.hi_open);
}

/// |L_N n u|.
inline Integer count_left_endpoints_in_union(unsigned long N, const IntervalUnion& u) {
    Integer total = 0;
    for (const auto& s : u.segments()) total += count_restricted(N, s);
    return total;
}

/// |C_N n u| = |L_N n u| + |L_N n (1 - u)|, using R_N = 1 - L_N. Pieces of u are
/// disjoint, so no point is counted twice.
inline Integer count_endpoints_in_union(unsigned long N, const IntervalUnion& u) {
    return count_left_endpoints_in_union(N, u) + count_left_endpoints_in_union(N, u.reflected());
}

} // namespace cantor
