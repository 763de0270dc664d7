#pragma once

#include "cantor/error.hpp"
#include "cantor/rational.hpp"

namespace cantor {

namespace detail {

/// Remainder state of the greedy ternary expansion of r/q: one step emits
/// digit floor(3r/q) and moves to 3r mod q.
struct TernaryStepper {
    const Integer& q;
    Integer two_q;

    explicit TernaryStepper(const Integer& den) : q(den), two_q(den * 2) {}

    int step(Integer& r) const {
        r *= 3;
        if (r >= two_q) {
            r -= two_q;
            return 2;
        }
        if (r >= q) {
            r -= q;
            return 1;
        }
        return 0;
    }
};

} // namespace detail

/// The Cantor function F(x) = mu([0, x]) for rational x in [0, 1], exactly.
///
/// Walks the greedy ternary expansion of x. A digit 1 at position j (all earlier
/// digits in {0, 2}) puts x in a removed gap, and F(x) = sum_{i<j} (d_i/2) 2^-i + 2^-j.
/// Otherwise x lies in K, its expansion is eventually periodic, and F(x) is the
/// eventually periodic binary fraction with digits d_i/2. Periodicity is detected with
/// Brent's algorithm on the remainder, so memory stays O(1) in the period length.
inline Rational cantor_cdf(const Rational& x) {
    if (x < 0 || x > 1) throw DomainError("cantor_cdf: x outside [0,1]");
    if (x == 1) return Rational(1);

    const Integer& q = x.get_den();
    detail::TernaryStepper stepper(q);

    // Brent: tortoise holds the state at the last power-of-two checkpoint, the hare
    // advances one digit at a time, so digits are observed in order.
    Integer tortoise = x.get_num();
    Integer hare = x.get_num();
    Integer bits = 0; // binary digits d_i/2 seen so far
    unsigned long position = 0;
    unsigned long power = 1;
    unsigned long lambda = 0;
    while (true) {
        int d = stepper.step(hare);
        ++position;
        if (d == 1) {
            bits <<= 1;
            bits += 1;
            Rational f(bits, pow2(position));
            f.canonicalize();
            return f;
        }
        bits <<= 1;
        if (d == 2) bits += 1;
        ++lambda;
        if (hare == tortoise) break;
        if (lambda == power) {
            tortoise = hare;
            power *= 2;
            lambda = 0;
        }
    }

    // x is in K. lambda is the period; find the pre-period length mu.
    Integer a = x.get_num();
    Integer b = x.get_num();
    for (unsigned long i = 0; i < lambda; ++i) stepper.step(b);
    unsigned long mu = 0;
    while (a != b) {
        stepper.step(a);
        stepper.step(b);
        ++mu;
    }

    Integer pre = 0;
    Integer per = 0;
    Integer r = x.get_num();
    for (unsigned long i = 0; i < mu; ++i) {
        pre <<= 1;
        if (stepper.step(r) == 2) pre += 1;
    }
    for (unsigned long i = 0; i < lambda; ++i) {
        per <<= 1;
        if (stepper.step(r) == 2) per += 1;
    }
    // F = (pre + per / (2^lambda - 1)) / 2^mu
    Integer cycle = pow2(lambda) - 1;
    Rational f(pre * cycle + per, pow2(mu) * cycle);
    f.canonicalize();
    return f;
}

} // namespace cantor
