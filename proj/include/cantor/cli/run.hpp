#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/cantor.hpp"
#include "cantor/cli/config.hpp"
#include "cantor/cli/report.hpp"

#ifndef CANTOR_GIT_DESCRIBE
#define CANTOR_GIT_DESCRIBE "unknown"
#endif

namespace cantor::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kComputationError = 2 };

namespace detail {

inline std::string join(const std::vector<unsigned long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

inline std::string rational_list(const std::vector<Rational>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_fraction_string(v[i]);
    return s + "]";
}

inline std::vector<unsigned long> exponents(const RunConfig& c) {
    if (c.n) return {*c.n};
    std::vector<unsigned long> out;
    for (unsigned long n = *c.n_min; n <= *c.n_max; ++n) out.push_back(n);
    return out;
}

/// Row skeleton: the inputs that reproduce it, under their config key names.
class RowBuilder {
public:
    explicit RowBuilder(const RunConfig& c) : c_(c) {}

    Row start() const {
        Row r = Row::object();
        r["command"] = std::string(command_name(c_.command));
        if (c_.tau_given) r["tau"] = to_fraction_string(c_.params.tau);
        r["y"] = to_fraction_string(c_.params.y);
        r["alpha"] = to_fraction_string(c_.params.alpha);
        r["beta1"] = to_fraction_string(c_.params.beta1);
        r["beta2"] = to_fraction_string(c_.params.beta2);
        r["precision"] = c_.precision;
        r["digits"] = c_.digits;
        r["max_nodes"] = c_.max_nodes;
        return r;
    }

private:
    const RunConfig& c_;
};

/// Runs fn over indices in parallel; rows are emitted in index order up to the
/// first failure, which is returned.
inline std::optional<std::string> sweep(std::size_t count, unsigned threads, std::vector<Row>& rows,
                                        const std::function<Row(std::size_t)>& fn) {
    std::vector<std::optional<Row>> slots(count);
    std::vector<std::string> errors(count);
    std::vector<char> domain(count, 0);
    parallel_for(count, threads, [&](std::size_t i) {
        try {
            slots[i] = fn(i);
        } catch (const ComputationError& e) {
            errors[i] = e.what();
        } catch (const DomainError& e) {
            errors[i] = e.what();
            domain[i] = 1;
        }
    });
    for (std::size_t i = 0; i < count; ++i) {
        if (!slots[i]) {
            if (domain[i]) throw DomainError(errors[i]);
            return errors[i];
        }
        rows.push_back(std::move(*slots[i]));
    }
    return std::nullopt;
}

} // namespace detail

/// Computes the rows for a validated config. Computation failures end the run
/// early with the rows produced so far; DomainError propagates.
inline Report compute(const RunConfig& c) {
    Report rep;
    const detail::RowBuilder rb(c);
    const int dg = c.digits;
    const ExperimentParams& p = c.params;
    RunOptions o;
    o.precision = c.precision;
    o.threads = c.threads;
    o.budget.max_nodes = c.max_nodes;
    const TraversalBudget budget{c.max_nodes};

    auto fail = [&](const std::string& msg) {
        rep.partial = true;
        rep.error = msg;
    };

    try {
        switch (c.command) {
        case Command::Measure: {
            Row r = rb.start();
            r["n"] = *c.n;
            r["sigma"] = to_fraction_string(*c.sigma);
            put_rational(r, "measure", measure_target(ApproxTarget{*c.n, p.y, *c.sigma}, budget).value(), dg);
            rep.rows.push_back(std::move(r));
            break;
        }
        case Command::Count: {
            Row r = rb.start();
            r["level"] = *c.level;
            r["lo"] = to_fraction_string(*c.lo);
            r["hi"] = to_fraction_string(*c.hi);
            r["lo_open"] = c.lo_open;
            r["hi_open"] = c.hi_open;
            const Segment s{*c.lo, *c.hi, c.lo_open, c.hi_open};
            put_integer(r, "left_endpoints", count_restricted(*c.level, s));
            put_integer(r, "endpoints", count_endpoints_in_union(*c.level, IntervalUnion::clipped({s})));
            rep.rows.push_back(std::move(r));
            break;
        }
        case Command::Fourier: {
            if (c.k) {
                Row r = rb.start();
                r["k"] = c.k->get_str();
                FourierMagnitude m = mu_hat_magnitude(*c.k, c.precision);
                r["magnitude_lo"] = to_fraction_string(m.lower().to_rational());
                r["magnitude_hi"] = to_fraction_string(m.upper().to_rational());
                r["magnitude_decimal"] = m.value.to_decimal(dg);
                r["error_bound"] = m.error_bound.to_decimal(6);
                rep.rows.push_back(std::move(r));
                break;
            }
            const auto ns = detail::exponents(c);
            if (auto err = detail::sweep(ns.size(), c.threads, rep.rows, [&](std::size_t i) {
                    Row r = rb.start();
                    r["t"] = c.t.get_str();
                    r["n"] = ns[i];
                    FourierMagnitude m = mu_hat_scaled({c.t, ns[i], c.precision});
                    r["magnitude_lo"] = to_fraction_string(m.lower().to_rational());
                    r["magnitude_hi"] = to_fraction_string(m.upper().to_rational());
                    r["magnitude_decimal"] = m.value.to_decimal(dg);
                    r["error_bound"] = m.error_bound.to_decimal(6);
                    return r;
                })) {
                fail(*err);
            }
            break;
        }
        case Command::Partition: {
            for (unsigned long N : c.blocks) {
                GoodBadPartition part = classify_good_bad(N, p.partition(), c.precision, c.threads);
                Row r = rb.start();
                r["C"] = to_fraction_string(p.C);
                r["block"] = N;
                put_integer(r, "t_range", part.t_range);
                put_enclosure(r, "threshold", part.threshold, dg);
                r["good_count"] = part.good.size();
                r["bad_count"] = part.bad.size();
                r["boundary_count"] = part.boundary.size();
                // |B_N| / N^(beta2 + alpha)
                const Enclosure scale = cantor::detail::inverse_power_enclosure(
                    N, Enclosure::exact(Rational(p.beta2 + p.alpha), c.precision + 16), c.precision);
                put_enclosure(r, "bad_ratio", Enclosure::exact(Rational(part.bad.size()), c.precision) * scale, dg);
                r["good"] = detail::join(part.good);
                r["bad"] = detail::join(part.bad);
                rep.rows.push_back(std::move(r));
            }
            break;
        }
        case Command::BlockSum: {
            for (unsigned long N : c.blocks) {
                BlockReport b = block_sum(N, p, o);
                Row r = rb.start();
                r["C"] = to_fraction_string(p.C);
                r["block"] = N;
                put_rational(r, "sum_good", b.sum_good, dg);
                put_rational(r, "sum_bad", b.sum_bad, dg);
                put_rational(r, "sum_total", b.sum_total, dg);
                put_enclosure(r, "bound_good", b.bound_good, dg);
                put_enclosure(r, "bound_bad", b.bound_bad, dg);
                put_enclosure(r, "comparison_good", b.comparison_good, dg);
                put_enclosure(r, "comparison_bad", b.comparison_bad, dg);
                r["good_count"] = b.good_count;
                r["bad_count"] = b.bad_count;
                r["boundary_count"] = b.boundary_count;
                rep.rows.push_back(std::move(r));
            }
            break;
        }
        case Command::BcSum: {
            if (c.method == Method::Sampled) {
                SampledBcSums s = sampled_bc_partial_sums(static_cast<unsigned>(*c.kmax), p, c.samples, c.seed, o);
                for (const auto& b : s.blocks) {
                    Row r = rb.start();
                    r["method"] = "sampled";
                    r["kmax"] = *c.kmax;
                    r["samples"] = c.samples;
                    r["seed"] = c.seed;
                    r["block_index"] = b.k;
                    r["block_sum_estimate"] = b.estimate;
                    r["block_sum_std_error"] = b.std_error;
                    r["cumulative_estimate"] = b.cumulative;
                    r["undecided"] = s.undecided;
                    rep.rows.push_back(std::move(r));
                }
                break;
            }
            Rational cumulative = 0;
            for (unsigned k = 0; k <= *c.kmax; ++k) {
                Rational b;
                try {
                    b = dyadic_block_sum(k, p, o);
                } catch (const ComputationError& e) {
                    fail(e.what());
                    break;
                }
                cumulative += b;
                Row r = rb.start();
                r["method"] = "exact";
                r["kmax"] = k;
                r["block_index"] = k;
                put_rational(r, "block_sum", b, dg);
                put_rational(r, "cumulative", cumulative, dg);
                rep.rows.push_back(std::move(r));
            }
            break;
        }
        case Command::LemmaRatio: {
            LemmaRatio lr = lemma_ratio(*c.n, p.y, *c.sigma, *c.delta, budget);
            Row r = rb.start();
            r["n"] = *c.n;
            r["sigma"] = to_fraction_string(*c.sigma);
            r["delta"] = to_fraction_string(*c.delta);
            r["level_fine"] = lr.chain.N;
            r["level_coarse"] = lr.chain.M;
            put_integer(r, "count_fine", lr.count_fine);
            put_integer(r, "count_coarse", lr.count_coarse);
            put_rational(r, "ratio", lr.ratio, dg);
            rep.rows.push_back(std::move(r));
            break;
        }
        case Command::Inequalities: {
            const auto ns = detail::exponents(c);
            RunOptions inner = o;
            inner.threads = 1;
            if (auto err = detail::sweep(ns.size(), c.threads, rep.rows, [&](std::size_t i) {
                    InequalityReport q = inequality_report(ns[i], p, inner);
                    Row r = rb.start();
                    r["n"] = ns[i];
                    put_enclosure(r, "sigma", q.sigma, dg);
                    put_enclosure(r, "delta", q.delta, dg);
                    put_rational(r, "measure_sigma", q.measure_sigma, dg);
                    put_rational(r, "measure_delta", q.measure_delta, dg);
                    put_rational(r, "measure_delta_lower", q.measure_delta_lower, dg);
                    put_integer(r, "t_range", q.t_range);
                    put_enclosure(r, "fourier_sum", q.fourier_sum, dg);
                    put_enclosure(r, "ratio_measure_lemma", q.ratio_measure_lemma, dg);
                    put_enclosure(r, "ratio_fourier_transfer", q.ratio_fourier_transfer, dg);
                    put_enclosure(r, "ratio_coarse", q.ratio_coarse, dg);
                    put_enclosure(r, "ratio_scale_transfer", q.ratio_scale_transfer, dg);
                    return r;
                })) {
                fail(*err);
            }
            break;
        }
        case Command::Simulate: {
            SurvivalParams sp;
            sp.psi = c.psi_table.empty() ? ApproxFunction::power_law(p.tau) : ApproxFunction::table(c.psi_table);
            sp.y = p.y;
            sp.n_min = *c.n_min;
            sp.n_max = *c.n_max;
            sp.samples = c.samples;
            sp.seed = c.seed;
            sp.threads = c.threads;
            sp.precision = c.precision;
            SurvivalResult s = survival_curve(sp);
            auto base = [&] {
                Row r = rb.start();
                if (!c.psi_table.empty()) r["psi"] = detail::rational_list(c.psi_table);
                r["n_min"] = *c.n_min;
                r["n_max"] = *c.n_max;
                r["samples"] = c.samples;
                r["seed"] = c.seed;
                return r;
            };
            for (const auto& e : s.per_n) {
                Row r = base();
                r["statistic"] = "hit_frequency";
                r["exponent"] = e.n;
                r["hits"] = e.hits;
                r["undecided"] = e.undecided;
                r["value"] = e.frequency(s.samples);
                r["std_error"] = e.std_error(s.samples);
                rep.rows.push_back(std::move(r));
            }
            Row r = base();
            r["statistic"] = "finite_horizon_survival";
            r["hits"] = s.survivors;
            r["undecided"] = s.undecided_samples;
            r["value"] = s.survival_fraction();
            rep.rows.push_back(std::move(r));
            break;
        }
        case Command::Constraint: {
            ConstraintResult cr = constraint_check(p, c.precision);
            Row r = rb.start();
            r["holds"] = cr.holds;
            r["certified"] = cr.certified;
            put_enclosure(r, "lhs", cr.lhs, dg);
            put_enclosure(r, "rhs", cr.rhs, dg);
            r["precision_used"] = cr.precision;
            rep.rows.push_back(std::move(r));
            break;
        }
        }
    } catch (const ComputationError& e) {
        fail(e.what());
    }
    return rep;
}

/// Adds provenance and the partial marker to every row, and an error row when
/// the run was cut short.
inline std::vector<Row> finalize(const RunConfig& c, Report rep, const std::string& timestamp) {
    std::vector<Row> out;
    for (auto& r : rep.rows) {
        r["C"] = to_fraction_string(c.params.C);
        r["git_describe"] = CANTOR_GIT_DESCRIBE;
        r["timestamp"] = timestamp;
        r["partial"] = rep.partial;
        out.push_back(std::move(r));
    }
    if (rep.partial) {
        Row r = detail::RowBuilder(c).start();
        r["C"] = to_fraction_string(c.params.C);
        r["git_describe"] = CANTOR_GIT_DESCRIBE;
        r["timestamp"] = timestamp;
        r["partial"] = true;
        r["error"] = rep.error;
        out.push_back(std::move(r));
    }
    return out;
}

inline void write_rows(std::ostream& os, Format f, const std::vector<Row>& rows) {
    if (f == Format::Csv) {
        write_csv(os, rows);
    } else {
        write_json(os, rows);
    }
}

/// Runs a validated config and writes the report. Returns the exit code.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    Report rep;
    try {
        rep = compute(c);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    const bool partial = rep.partial;
    const std::string msg = rep.error;
    const std::vector<Row> rows = finalize(c, std::move(rep), utc_timestamp());
    if (c.output == "-") {
        write_rows(out, c.format, rows);
    } else {
        std::ofstream f(c.output, std::ios::binary);
        if (!f) {
            err << "error: cannot open output file '" << c.output << "'\n";
            return kValidationError;
        }
        write_rows(f, c.format, rows);
    }
    if (partial) {
        err << "error: " << msg << " (partial results written)\n";
        return kComputationError;
    }
    return kOk;
}

/// Settings that re-create a report row: every key of the row that is also a config key.
inline RawSettings replay_settings(const Row& row) {
    RawSettings s;
    for (const auto& [k, v] : row.items()) {
        if (k == "command") continue;
        if (find_key(k)) s[k] = {field_text(v), "row"};
    }
    return s;
}

} // namespace cantor::cli
