#pragma once

#include <string>

#include "cantor/error.hpp"
#include "cantor/rational.hpp"
#include "cantor/targets.hpp"

namespace cantor {

/// Levels N (fine) and M (coarse) bracketing the two scales:
///   sigma/2^(n+5) <= 3^-N <= sigma/2^n <= 3^-M <= delta/2^n.
struct ScaleChain {
    unsigned long n = 0;
    Rational sigma;
    Rational delta;
    unsigned long N = 0;
    unsigned long M = 0;

    /// Re-checks all four inequalities in exact integer arithmetic.
    bool verify() const {
        const Integer p3N = pow3(N);
        const Integer p3M = pow3(M);
        const Integer p2n = pow2(n);
        const Integer& sp = sigma.get_num();
        const Integer& sq = sigma.get_den();
        const Integer& dp = delta.get_num();
        const Integer& dq = delta.get_den();
        // sigma/2^(n+5) <= 3^-N  <=>  sp 3^N <= sq 2^(n+5)
        bool a = sp * p3N <= sq * (p2n << 5);
        // 3^-N <= sigma/2^n  <=>  sq 2^n <= sp 3^N
        bool b = sq * p2n <= sp * p3N;
        // sigma/2^n <= 3^-M  <=>  sp 3^M <= sq 2^n
        bool c = sp * p3M <= sq * p2n;
        // 3^-M <= delta/2^n  <=>  dq 2^n <= dp 3^M
        bool d = dq * p2n <= dp * p3M;
        return a && b && c && d;
    }
};

/// Smallest admissible N and largest admissible M. Throws GapTooNarrow when no
/// power of 3 fits between sigma/2^n and delta/2^n.
inline ScaleChain make_scale_chain(unsigned long n, const Rational& sigma, const Rational& delta) {
    if (!(sigma > 0 && sigma < delta && delta <= 1)) {
        throw DomainError("make_scale_chain: need 0 < sigma < delta <= 1");
    }
    const Integer p2n = pow2(n);
    const Integer& sp = sigma.get_num();
    const Integer& sq = sigma.get_den();
    const Integer& dp = delta.get_num();
    const Integer& dq = delta.get_den();

    // N: least with sp 3^N >= sq 2^n.
    unsigned long N = 0;
    Integer p3 = 1;
    const Integer need_fine = sq * p2n;
    while (sp * p3 < need_fine) {
        p3 *= 3;
        ++N;
    }
    // M: greatest with sp 3^M <= sq 2^n, i.e. N or N - 1.
    long M = (sp * p3 == need_fine) ? static_cast<long>(N) : static_cast<long>(N) - 1;
    // ... and 3^-M <= delta/2^n needs dp 3^M >= dq 2^n.
    if (M < 0 || dp * pow3(static_cast<unsigned long>(M)) < dq * p2n) {
        throw GapTooNarrow("make_scale_chain: no power of 3 between sigma/2^n and delta/2^n (n = " +
                           std::to_string(n) + ")");
    }
    ScaleChain chain{n, sigma, delta, N, static_cast<unsigned long>(M)};
    if (!chain.verify()) throw ComputationError("make_scale_chain: chain failed its own verification");
    return chain;
}

struct LemmaRatio {
    ScaleChain chain;
    Integer count_fine;   // |C_N n A_n^y(sigma)|
    Integer count_coarse; // |C_M n A_n^y(2 delta)|
    Rational ratio;       // count_fine / count_coarse, 0 when both vanish
};

/// Measures the counting ratio between the two scales of the chain.
inline LemmaRatio lemma_ratio(unsigned long n, const Rational& y, const Rational& sigma, const Rational& delta,
                              TraversalBudget budget = {}) {
    ScaleChain chain = make_scale_chain(n, sigma, delta);
    Integer fine = count_target_endpoints(chain.N, ApproxTarget{n, y, sigma}, budget);
    Integer coarse = count_target_endpoints(chain.M, ApproxTarget{n, y, Rational(delta * 2)}, budget);
    Rational ratio = 0;
    if (coarse == 0) {
        if (fine != 0) {
            throw ComputationError("lemma_ratio: fine-scale endpoints with no coarse-scale endpoints");
        }
    } else {
        ratio = Rational(fine, coarse);
        ratio.canonicalize();
    }
    return {std::move(chain), std::move(fine), std::move(coarse), std::move(ratio)};
}

} // namespace cantor
