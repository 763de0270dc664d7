#pragma once

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "cantor/error.hpp"
#include "cantor/parallel.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: block i of stream s under key `seed`. Any block can be
/// produced independently, so extending a sample never changes its existing digits.
inline std::uint64_t random_block(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    return mix64(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)) + i);
}

} // namespace detail

/// Truncated mu-random point: ternary digits d_1..d_L in {0,2}, value
/// x_L = sum d_i 3^-i with 0 <= x - x_L <= 3^-L for the full random point x.
class MuSample {
public:
    MuSample() = default;
    explicit MuSample(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {
        for (auto d : digits_) {
            if (d != 0 && d != 2) throw DomainError("MuSample: digits must be 0 or 2");
        }
    }
    MuSample(std::uint64_t seed, std::uint64_t stream, std::size_t depth) : seed_(seed), stream_(stream), seeded_(true) {
        extend(depth);
    }

    std::size_t depth() const { return digits_.size(); }
    const std::vector<std::uint8_t>& digits() const { return digits_; }

    /// Grows the sample to `depth` digits; the existing prefix is kept. Explicit-digit
    /// samples are padded with zeros.
    void extend(std::size_t depth) {
        std::size_t old = digits_.size();
        if (depth <= old) return;
        digits_.resize(depth, 0);
        if (!seeded_) return;
        for (std::size_t i = old; i < depth; ++i) {
            std::uint64_t block = detail::random_block(seed_, stream_, i / 64);
            digits_[i] = ((block >> (i % 64)) & 1u) ? 2 : 0;
        }
    }

    /// D with x_L = D / 3^L.
    Integer numerator() const {
        Integer d = 0;
        // 39 trits at a time: 3^39 < 2^63
        constexpr std::size_t chunk = 39;
        const Integer chunk_scale = pow3(chunk);
        std::size_t i = 0;
        while (i < digits_.size()) {
            std::size_t take = std::min(chunk, digits_.size() - i);
            std::uint64_t v = 0;
            for (std::size_t j = 0; j < take; ++j) v = v * 3 + digits_[i + j];
            if (take == chunk) {
                d *= chunk_scale;
            } else {
                d *= pow3(take);
            }
            d += Integer(static_cast<unsigned long>(v));
            i += take;
        }
        return d;
    }

    Rational value() const {
        Rational q(numerator(), pow3(digits_.size()));
        q.canonicalize();
        return q;
    }

private:
    std::vector<std::uint8_t> digits_;
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    bool seeded_ = false;
};

/// Digits iid uniform on {0,2}: exactly the law of mu. Deterministic in (seed, stream).
inline MuSample sample_mu(std::uint64_t seed, std::size_t depth, std::uint64_t stream = 0) {
    if (depth < 1) throw DomainError("sample_mu: depth must be >= 1");
    return MuSample(seed, stream, depth);
}

enum class HitResult { Hit, Miss, Undecided };

inline const char* to_string(HitResult h) {
    switch (h) {
    case HitResult::Hit: return "hit";
    case HitResult::Miss: return "miss";
    default: return "undecided";
    }
}

/// Starting truncation depth for exponent n: ceil(n log_3 2) + 64 digits.
inline std::size_t initial_depth(unsigned long n) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * std::log(2.0) / std::log(3.0))) + 64;
}

/// Decides ||2^n x - y|| < psi for the full point x behind a truncated sample of fixed depth L.
/// 2^n x_L mod 1 = (2^n D mod 3^L) / 3^L exactly, and x - x_L in [0, 3^-L] moves 2^n x by at
/// most s = 2^n 3^-L, so the true distance is within s of the computed one.
class HitTester {
public:
    HitTester(std::size_t depth, const Rational& y) : depth_(depth), mod_(pow3(depth)) {
        Rational yf = frac_of(y);
        yq_ = yf.get_den();
        yp_ = yf.get_num();
        scale_ = mod_ * yq_;          // common denominator 3^L yq
        y_scaled_ = yp_ * mod_;       // y * scale
    }

    std::size_t depth() const { return depth_; }
    const Integer& modulus() const { return mod_; }

    /// 2^n D mod 3^L.
    Integer rotate(const Integer& D, unsigned long n) const {
        Integer p;
        mpz_powm_ui(p.get_mpz_t(), Integer(2).get_mpz_t(), n, mod_.get_mpz_t());
        p *= D;
        mpz_fdiv_r(p.get_mpz_t(), p.get_mpz_t(), mod_.get_mpz_t());
        return p;
    }
    /// Advances 2^n D mod 3^L to 2^(n+1) D mod 3^L.
    void double_rotation(Integer& r) const {
        r <<= 1;
        if (r >= mod_) r -= mod_;
    }

    /// Classifies a rotated residue r = 2^n D mod 3^L against psi in [psi.lower, psi.upper].
    HitResult classify(const Integer& r, unsigned long n, const RationalEnclosure& psi) const {
        if (psi.upper <= 0) return HitResult::Miss;
        if (psi.lower * 2 > 1) return HitResult::Hit;
        // distance scaled by 3^L yq
        Integer v = r * yq_ - y_scaled_;
        mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), scale_.get_mpz_t());
        Integer w = scale_ - v;
        const Integer& dist = v < w ? v : w;
        Integer slack = yq_ << n; // 2^n 3^-L scaled
        // hit if dist + slack < psi_lo * scale
        Integer up = dist + slack;
        if (up * psi.lower.get_den() < psi.lower.get_num() * scale_) return HitResult::Hit;
        Integer down = dist - slack;
        if (down * psi.upper.get_den() >= psi.upper.get_num() * scale_) return HitResult::Miss;
        return HitResult::Undecided;
    }

    HitResult test(const Integer& D, unsigned long n, const RationalEnclosure& psi) const {
        return classify(rotate(D, n), n, psi);
    }

private:
    std::size_t depth_;
    Integer mod_;
    Integer yp_, yq_, scale_, y_scaled_;
};

/// Hit test at the sample's current depth.
inline HitResult hit_test(const MuSample& s, unsigned long n, const Rational& y, const Rational& psi_n) {
    if (n < 1) throw DomainError("hit_test: n must be >= 1");
    HitTester tester(s.depth(), y);
    return tester.test(s.numerator(), n, RationalEnclosure::exact(psi_n));
}

inline HitResult hit_test(const MuSample& s, unsigned long n, const Rational& y, const RationalEnclosure& psi_n) {
    if (n < 1) throw DomainError("hit_test: n must be >= 1");
    HitTester tester(s.depth(), y);
    return tester.test(s.numerator(), n, psi_n);
}

inline constexpr int kMaxDepthDoublings = 16;

/// Hit test that doubles the depth of an undecided sample, at most 16 times.
inline HitResult hit_test_resolving(MuSample& s, unsigned long n, const Rational& y, const RationalEnclosure& psi_n) {
    HitResult r = hit_test(s, n, y, psi_n);
    for (int i = 0; i < kMaxDepthDoublings && r == HitResult::Undecided; ++i) {
        s.extend(2 * s.depth());
        r = hit_test(s, n, y, psi_n);
    }
    return r;
}

/// psi(n): a power law n^-tau or an explicit table psi(1), psi(2), ... (zero past its end).
class ApproxFunction {
public:
    struct PowerLaw {
        Rational tau;
    };
    struct Table {
        std::vector<Rational> values;
    };

    static ApproxFunction power_law(Rational tau) {
        if (tau < 0) throw DomainError("ApproxFunction: tau must be >= 0");
        return ApproxFunction(PowerLaw{std::move(tau)});
    }
    static ApproxFunction table(std::vector<Rational> values) {
        for (const auto& v : values) {
            if (v < 0) throw DomainError("ApproxFunction: table values must be >= 0");
        }
        return ApproxFunction(Table{std::move(values)});
    }

    RationalEnclosure operator()(unsigned long n, mpfr_prec_t precision = 128) const {
        if (auto* p = std::get_if<PowerLaw>(&kind_)) return inverse_power(n, p->tau, precision);
        const auto& t = std::get<Table>(kind_).values;
        if (n >= 1 && n <= t.size()) return RationalEnclosure::exact(t[n - 1]);
        return RationalEnclosure::exact(0);
    }

    const std::variant<PowerLaw, Table>& kind() const { return kind_; }

private:
    explicit ApproxFunction(std::variant<PowerLaw, Table> k) : kind_(std::move(k)) {}
    std::variant<PowerLaw, Table> kind_;
};

struct SurvivalParams {
    ApproxFunction psi = ApproxFunction::power_law(Rational(2));
    Rational y = 0;
    unsigned long n_min = 1;
    unsigned long n_max = 1;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    mpfr_prec_t precision = 128;
};

struct PerExponent {
    unsigned long n = 0;
    std::uint64_t hits = 0;
    std::uint64_t undecided = 0;

    double frequency(std::uint64_t samples) const { return static_cast<double>(hits) / static_cast<double>(samples); }
    double std_error(std::uint64_t samples) const {
        double p = frequency(samples);
        return std::sqrt(p * (1 - p) / static_cast<double>(samples));
    }
};

/// Finite-horizon proxy for W_2(psi, y): per-n hit frequencies (estimates of
/// mu(A_n^y(psi(n)))) and the fraction of samples with at least one hit in [n_min, n_max].
struct SurvivalResult {
    std::uint64_t samples = 0;
    std::uint64_t survivors = 0;          // samples with >= 1 hit
    std::uint64_t undecided_samples = 0;  // no hit, but some n left undecided at the depth cap
    std::vector<PerExponent> per_n;       // sorted by n

    double survival_fraction() const { return static_cast<double>(survivors) / static_cast<double>(samples); }
};

/// Sample i uses stream i of `seed`, so results do not depend on the worker count;
/// each worker takes a contiguous slice of sample indices and counts are summed.
inline SurvivalResult survival_curve(const SurvivalParams& p) {
    if (p.n_min < 1 || p.n_min > p.n_max) throw DomainError("survival_curve: need 1 <= n_min <= n_max");
    if (p.samples < 1) throw DomainError("survival_curve: samples must be >= 1");

    const std::size_t span = p.n_max - p.n_min + 1;
    std::vector<RationalEnclosure> psi(span);
    for (std::size_t i = 0; i < span; ++i) psi[i] = p.psi(p.n_min + i, p.precision);

    const std::size_t depth = initial_depth(p.n_max);
    const HitTester tester(depth, p.y);
    Integer start_power;
    mpz_powm_ui(start_power.get_mpz_t(), Integer(2).get_mpz_t(), p.n_min, tester.modulus().get_mpz_t());

    struct Partial {
        std::uint64_t survivors = 0, undecided_samples = 0;
        std::vector<std::uint64_t> hits, undecided;
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(p.threads, static_cast<unsigned>(std::min<std::uint64_t>(p.samples, 256))));
    std::vector<Partial> partials(workers);

    parallel_for(workers, workers, [&](std::size_t w) {
        Partial& acc = partials[w];
        acc.hits.assign(span, 0);
        acc.undecided.assign(span, 0);
        const std::uint64_t begin = p.samples * w / workers;
        const std::uint64_t end = p.samples * (w + 1) / workers;
        for (std::uint64_t s = begin; s < end; ++s) {
            MuSample sample(p.seed, s, depth);
            const Integer D = sample.numerator();
            Integer r = start_power * D;
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), tester.modulus().get_mpz_t());
            bool any_hit = false, any_open = false;
            for (std::size_t i = 0; i < span; ++i) {
                const unsigned long n = p.n_min + i;
                if (i > 0) tester.double_rotation(r);
                HitResult h = tester.classify(r, n, psi[i]);
                if (h == HitResult::Undecided) {
                    MuSample deeper = sample;
                    h = hit_test_resolving(deeper, n, p.y, psi[i]);
                }
                if (h == HitResult::Hit) {
                    ++acc.hits[i];
                    any_hit = true;
                } else if (h == HitResult::Undecided) {
                    ++acc.undecided[i];
                    any_open = true;
                }
            }
            if (any_hit) {
                ++acc.survivors;
            } else if (any_open) {
                ++acc.undecided_samples;
            }
        }
    });

    SurvivalResult out;
    out.samples = p.samples;
    out.per_n.resize(span);
    for (std::size_t i = 0; i < span; ++i) out.per_n[i].n = p.n_min + i;
    for (const auto& acc : partials) {
        out.survivors += acc.survivors;
        out.undecided_samples += acc.undecided_samples;
        for (std::size_t i = 0; i < span; ++i) {
            out.per_n[i].hits += acc.hits[i];
            out.per_n[i].undecided += acc.undecided[i];
        }
    }
    return out;
}

} // namespace cantor
