#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cantor/bigfloat.hpp"
#include "cantor/error.hpp"
#include "cantor/fourier.hpp"
#include "cantor/parallel.hpp"
#include "cantor/params.hpp"
#include "cantor/rational.hpp"
#include "cantor/sampler.hpp"
#include "cantor/schedule.hpp"
#include "cantor/targets.hpp"

namespace cantor {

struct RunOptions {
    mpfr_prec_t precision = 128;
    unsigned threads = 1;
    TraversalBudget budget{};
};

namespace detail {

/// n^-e for a real exponent enclosure e.
inline Enclosure inverse_power_enclosure(unsigned long n, const Enclosure& e, mpfr_prec_t prec) {
    Enclosure ln = Enclosure::log_of(Rational(n), prec + 16);
    Enclosure zero = Enclosure::exact(Rational(0), prec + 16);
    return (zero - ln * e).exp(prec);
}

/// mu(A_n^y(sigma_n)) with sigma_n replaced by its upper rational bound, so the
/// value never understates the true measure.
inline Rational conservative_target_measure(unsigned long n, const ExperimentParams& p, const RunOptions& o) {
    const ScheduleValues s = schedule_eval(p.schedule(), n, o.precision);
    return measure_target(ApproxTarget{n, p.y, s.sigma.upper}, o.budget).value();
}

} // namespace detail

struct BlockEntry {
    unsigned long n = 0;
    Classification status = Classification::Bad;
    RationalEnclosure sigma;
    Rational measure;       // mu(A_n^y(sigma_n upper))
    Enclosure comparison;   // delta^(1-gamma) sigma^gamma if good, sigma^gamma otherwise
};

/// Sum of mu(A_n^y(sigma_n)) over n in [N, 2N], split along G_N / B_N, next to the
/// two comparison quantities sum n^-(tau gamma + alpha(1 - gamma)) and N^(beta2 + alpha - tau gamma).
struct BlockReport {
    unsigned long N = 0;
    Rational sum_good;
    Rational sum_bad;
    Rational sum_total;
    Enclosure bound_good;
    Enclosure bound_bad;
    Enclosure comparison_good; // sum over good n of delta^(1-gamma) sigma^gamma
    Enclosure comparison_bad;  // sum over bad n of sigma^gamma
    std::size_t good_count = 0;
    std::size_t bad_count = 0;
    std::size_t boundary_count = 0;
    Enclosure threshold;
    Integer t_range;
    std::vector<BlockEntry> entries; // sorted by n
};

inline BlockReport block_sum(unsigned long N, const ExperimentParams& p, const RunOptions& o = {}) {
    if (N < 1) throw DomainError("block_sum: N must be >= 1");
    p.validate();
    const mpfr_prec_t prec = o.precision;
    GoodBadPartition part = classify_good_bad(N, p.partition(), prec, o.threads);

    const Enclosure g = ExperimentParams::gamma(prec + 16);
    const Enclosure one = Enclosure::exact(Rational(1), prec + 16);
    const Enclosure tau_gamma = Enclosure::exact(p.tau, prec + 16) * g;
    const Enclosure good_exp = tau_gamma + Enclosure::exact(p.alpha, prec + 16) * (one - g);

    const std::size_t count = N + 1;
    std::vector<BlockEntry> entries(count);
    parallel_for(count, o.threads, [&](std::size_t i) {
        const unsigned long n = N + static_cast<unsigned long>(i);
        BlockEntry e;
        e.n = n;
        e.status = part.details[i].status;
        e.sigma = schedule_eval(p.schedule(), n, prec).sigma;
        e.measure = measure_target(ApproxTarget{n, p.y, e.sigma.upper}, o.budget).value();
        e.comparison = detail::inverse_power_enclosure(n, e.status == Classification::Good ? good_exp : tau_gamma, prec);
        entries[i] = std::move(e);
    });

    BlockReport r;
    r.N = N;
    r.sum_good = 0;
    r.sum_bad = 0;
    r.comparison_good = Enclosure::exact(Rational(0), prec);
    r.comparison_bad = Enclosure::exact(Rational(0), prec);
    Enclosure bound_good = Enclosure::exact(Rational(0), prec);
    for (const auto& e : entries) {
        bound_good = bound_good + detail::inverse_power_enclosure(e.n, good_exp, prec);
        if (e.status == Classification::Good) {
            r.sum_good += e.measure;
            r.comparison_good = r.comparison_good + e.comparison;
            ++r.good_count;
        } else {
            r.sum_bad += e.measure;
            r.comparison_bad = r.comparison_bad + e.comparison;
            ++r.bad_count;
            if (e.status == Classification::Boundary) ++r.boundary_count;
        }
    }
    r.sum_total = r.sum_good + r.sum_bad;
    r.bound_good = std::move(bound_good);
    // N^(beta2 + alpha - tau gamma) = N^-(tau gamma - beta2 - alpha)
    r.bound_bad = detail::inverse_power_enclosure(N, tau_gamma - Enclosure::exact(Rational(p.beta2 + p.alpha), prec + 16), prec);
    r.threshold = part.threshold;
    r.t_range = part.t_range;
    r.entries = std::move(entries);
    return r;
}

struct DyadicBlock {
    unsigned k = 0;
    Rational block_sum;  // sum_{n=2^k}^{2^(k+1)} mu(A_n^y(sigma_n))
    Rational cumulative; // running total over blocks 0..k
};

/// One dyadic block [2^k, 2^(k+1)], both ends included.
inline Rational dyadic_block_sum(unsigned k, const ExperimentParams& p, const RunOptions& o = {}) {
    if (k > 40) throw DomainError("dyadic_block_sum: k too large");
    const unsigned long first = 1ul << k;
    const std::size_t count = first + 1;
    std::vector<Rational> values(count);
    parallel_for(count, o.threads, [&](std::size_t i) {
        values[i] = detail::conservative_target_measure(first + i, p, o);
    });
    Rational total = 0;
    for (const auto& v : values) total += v;
    return total;
}

/// Dyadic block sums for k = 0..k_max and their running totals. The blocks overlap
/// at their ends, so the cumulative sum bounds sum_{n <= 2^(k+1)} mu(A_n) from above.
inline std::vector<DyadicBlock> bc_partial_sums(unsigned k_max, const ExperimentParams& p, const RunOptions& o = {}) {
    p.validate();
    std::vector<DyadicBlock> out;
    Rational cumulative = 0;
    for (unsigned k = 0; k <= k_max; ++k) {
        Rational b = dyadic_block_sum(k, p, o);
        cumulative += b;
        out.push_back({k, std::move(b), cumulative});
    }
    return out;
}

/// Monte Carlo estimate of one dyadic block sum with its standard error, taking the
/// correlation between exponents of the same sample into account.
struct SampledBlock {
    unsigned k = 0;
    double estimate = 0;
    double std_error = 0;
    double cumulative = 0;
};

struct SampledBcSums {
    std::vector<SampledBlock> blocks;
    std::uint64_t undecided = 0; // hit tests left open at the depth cap, counted as misses
};

inline SampledBcSums sampled_bc_partial_sums(unsigned k_max, const ExperimentParams& p,
                                                         std::uint64_t samples, std::uint64_t seed,
                                                         const RunOptions& o = {}) {
    p.validate();
    if (samples < 2) throw DomainError("sampled_bc_partial_sums: need at least 2 samples");
    if (k_max > 20) throw DomainError("sampled_bc_partial_sums: k_max too large");
    const unsigned long n_max = 2ul << k_max;
    std::vector<RationalEnclosure> psi(n_max + 1);
    for (unsigned long n = 1; n <= n_max; ++n) psi[n] = inverse_power(n, p.tau, o.precision);

    const std::size_t depth = initial_depth(n_max);
    const HitTester tester(depth, p.y);
    const unsigned blocks = k_max + 1;
    struct Acc {
        std::vector<double> sum, sum_sq;
        std::uint64_t undecided = 0;
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(o.threads, 256));
    std::vector<Acc> acc(workers);
    parallel_for(workers, workers, [&](std::size_t w) {
        Acc& a = acc[w];
        a.sum.assign(blocks, 0);
        a.sum_sq.assign(blocks, 0);
        std::vector<std::uint64_t> hit(n_max + 1);
        for (std::uint64_t s = samples * w / workers; s < samples * (w + 1) / workers; ++s) {
            MuSample sample(seed, s, depth);
            const Integer D = sample.numerator();
            Integer r = D * 2;
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), tester.modulus().get_mpz_t());
            for (unsigned long n = 1; n <= n_max; ++n) {
                if (n > 1) tester.double_rotation(r);
                HitResult h = tester.classify(r, n, psi[n]);
                if (h == HitResult::Undecided) {
                    MuSample deeper = sample;
                    h = hit_test_resolving(deeper, n, p.y, psi[n]);
                }
                if (h == HitResult::Undecided) ++a.undecided;
                hit[n] = h == HitResult::Hit ? 1 : 0;
            }
            for (unsigned k = 0; k < blocks; ++k) {
                double c = 0;
                for (unsigned long n = 1ul << k; n <= (2ul << k); ++n) c += static_cast<double>(hit[n]);
                a.sum[k] += c;
                a.sum_sq[k] += c * c;
            }
        }
    });

    SampledBcSums out;
    out.blocks.resize(blocks);
    for (const auto& a : acc) out.undecided += a.undecided;
    double cumulative = 0;
    const double S = static_cast<double>(samples);
    for (unsigned k = 0; k < blocks; ++k) {
        double sum = 0, sum_sq = 0;
        for (const auto& a : acc) {
            sum += a.sum[k];
            sum_sq += a.sum_sq[k];
        }
        const double mean = sum / S;
        const double var = std::max(0.0, (sum_sq - S * mean * mean) / (S - 1));
        cumulative += mean;
        out.blocks[k] = {k, mean, std::sqrt(var / S), cumulative};
    }
    return out;
}

/// The four measured ratios at one exponent n:
///   (i)   mu(A_n(sigma_n)) / sigma_n^gamma
///   (ii)  mu(A_n(delta_n)) / (delta_n (1 + sum_{1<=|t|<=2/delta_n} |mu-hat(t 2^n)|))
///   (iii) mu(A_n(delta_n)) / delta_n
///   (iv)  mu(A_n(sigma_n)) / ((sigma_n/delta_n)^gamma mu(A_n(delta_n)))
/// Numerator measures use the upper bounds of sigma_n, delta_n and the denominator measure
/// in (iv) the lower bound of delta_n, so each ratio enclosure bounds the true ratio from above.
struct InequalityReport {
    unsigned long n = 0;
    RationalEnclosure sigma;
    RationalEnclosure delta;
    Rational measure_sigma;       // at sigma upper
    Rational measure_delta;       // at delta upper
    Rational measure_delta_lower; // at delta lower
    Integer t_range;              // floor(2 / delta_n)
    Enclosure fourier_sum;        // sum over 1 <= |t| <= t_range
    Enclosure ratio_measure_lemma;
    Enclosure ratio_fourier_transfer;
    Enclosure ratio_coarse;
    Enclosure ratio_scale_transfer;
};

inline InequalityReport inequality_report(unsigned long n, const ExperimentParams& p, const RunOptions& o = {}) {
    if (n < 1) throw DomainError("inequality_report: n must be >= 1");
    p.validate();
    const mpfr_prec_t prec = o.precision;
    InequalityReport r;
    r.n = n;
    const ScheduleValues s = schedule_eval(p.schedule(), n, prec);
    r.sigma = s.sigma;
    r.delta = s.delta;
    r.measure_sigma = measure_target(ApproxTarget{n, p.y, s.sigma.upper}, o.budget).value();
    r.measure_delta = measure_target(ApproxTarget{n, p.y, s.delta.upper}, o.budget).value();
    r.measure_delta_lower = s.delta.is_exact()
                                ? r.measure_delta
                                : measure_target(ApproxTarget{n, p.y, s.delta.lower}, o.budget).value();

    r.t_range = t_range_for(n, p.alpha);
    Enclosure fsum = Enclosure::exact(Rational(0), prec);
    for (Integer t = 1; t <= r.t_range; ++t) {
        FourierMagnitude m = mu_hat_scaled({t, n, prec});
        Enclosure e(m.lower(), m.upper());
        fsum = fsum + e + e; // +t and -t
    }
    r.fourier_sum = fsum;

    const Enclosure g = ExperimentParams::gamma(prec + 16);
    const Enclosure sigma = s.sigma.to_enclosure(prec + 16);
    const Enclosure delta = s.delta.to_enclosure(prec + 16);
    const Enclosure one = Enclosure::exact(Rational(1), prec + 16);
    const Enclosure ms = Enclosure::exact(r.measure_sigma, prec + 16);
    const Enclosure md = Enclosure::exact(r.measure_delta, prec + 16);
    const Enclosure md_lo = Enclosure::exact(r.measure_delta_lower, prec + 16);

    r.ratio_measure_lemma = ms / sigma.pow(g, prec + 16);
    r.ratio_fourier_transfer = md / (delta * (one + fsum));
    r.ratio_coarse = md / delta;
    if (md_lo.positive()) {
        r.ratio_scale_transfer = ms / ((sigma / delta).pow(g, prec + 16) * md_lo);
    } else {
        // mu(A_n(delta_n)) = 0 forces mu(A_n(sigma_n)) = 0 by inclusion.
        r.ratio_scale_transfer = Enclosure::exact(Rational(0), prec);
    }
    return r;
}

} // namespace cantor
