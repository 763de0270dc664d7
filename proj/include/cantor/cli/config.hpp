#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/params.hpp"
#include "cantor/rational.hpp"
#include "cantor/schedule.hpp"

namespace cantor::cli {

enum class Command { Measure, Count, Fourier, Partition, BlockSum, BcSum, LemmaRatio, Inequalities, Simulate, Constraint };
enum class Format { Csv, Json };
enum class Method { Exact, Sampled };

inline constexpr std::pair<Command, std::string_view> kCommandNames[] = {
    {Command::Measure, "measure"},         {Command::Count, "count"},
    {Command::Fourier, "fourier"},         {Command::Partition, "partition"},
    {Command::BlockSum, "block-sum"},      {Command::BcSum, "bc-sum"},
    {Command::LemmaRatio, "lemma-ratio"},  {Command::Inequalities, "inequalities"},
    {Command::Simulate, "simulate"},       {Command::Constraint, "constraint"},
};

inline std::string_view command_name(Command c) {
    for (auto [cmd, name] : kCommandNames) {
        if (cmd == c) return name;
    }
    return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
    for (auto [cmd, name] : kCommandNames) {
        if (name == s) return cmd;
    }
    return std::nullopt;
}

/// Normalized, validated run configuration.
struct RunConfig {
    Command command = Command::Constraint;
    ExperimentParams params; // tau, y, alpha, beta1, beta2, C
    bool tau_given = false;

    std::optional<unsigned long> n, n_min, n_max, level, kmax;
    std::vector<unsigned long> blocks;
    std::optional<Rational> sigma, delta, lo, hi;
    bool lo_open = false, hi_open = false;
    std::optional<Integer> k; // plain Fourier frequency
    Integer t = 1;            // Fourier multiplier
    std::vector<Rational> psi_table;

    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    Method method = Method::Exact;
    std::uint64_t max_nodes = std::uint64_t{1} << 24;

    std::string output = "-";
    Format format = Format::Json;
    mpfr_prec_t precision = 128;
    unsigned threads = 1;
    int digits = 30;
};

/// A raw setting and where it came from ("line 3", "--tau").
struct RawValue {
    std::string text;
    std::string origin;
};
using RawSettings = std::map<std::string, RawValue>;

struct ValidationResult {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return config.has_value(); }
};

enum class KeyType { Rational, Unsigned, Bool, Text, UnsignedList, RationalList, BigInteger };

struct KeySpec {
    std::string_view name;
    KeyType type;
};

inline constexpr KeySpec kKeys[] = {
    {"command", KeyType::Text},      {"tau", KeyType::Rational},         {"y", KeyType::Rational},
    {"alpha", KeyType::Rational},    {"beta1", KeyType::Rational},       {"beta2", KeyType::Rational},
    {"C", KeyType::Rational},        {"n", KeyType::Unsigned},           {"n_min", KeyType::Unsigned},
    {"n_max", KeyType::Unsigned},    {"block", KeyType::UnsignedList},   {"level", KeyType::Unsigned},
    {"kmax", KeyType::Unsigned},     {"sigma", KeyType::Rational},       {"delta", KeyType::Rational},
    {"lo", KeyType::Rational},       {"hi", KeyType::Rational},          {"lo_open", KeyType::Bool},
    {"hi_open", KeyType::Bool},      {"k", KeyType::BigInteger},         {"t", KeyType::BigInteger},
    {"psi", KeyType::RationalList},  {"samples", KeyType::Unsigned},     {"seed", KeyType::Unsigned},
    {"method", KeyType::Text},       {"max_nodes", KeyType::Unsigned},   {"output", KeyType::Text},
    {"format", KeyType::Text},       {"precision", KeyType::Unsigned},   {"threads", KeyType::Unsigned},
    {"digits", KeyType::Unsigned},
};

inline const KeySpec* find_key(std::string_view name) {
    for (const auto& k : kKeys) {
        if (k.name == name) return &k;
    }
    return nullptr;
}

namespace detail {

inline std::string trim(std::string_view s) { return std::string(cantor::detail::trim(s)); }

inline std::string unquote(const std::string& v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

/// Elements of "[a, b, c]" or "a,b,c".
inline std::vector<std::string> split_list(const std::string& v) {
    std::string body = trim(v);
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') throw DomainError("unterminated list");
        body = body.substr(1, body.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t = unquote(trim(item));
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

inline std::uint64_t parse_unsigned(const std::string& s) {
    Integer v = cantor::detail::parse_signed_integer(trim(s));
    if (v < 0 || !v.fits_ulong_p()) throw DomainError("not a non-negative integer");
    return v.get_ui();
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw DomainError("not a boolean");
}

inline std::string type_name(KeyType t) {
    switch (t) {
    case KeyType::Rational: return "a rational number";
    case KeyType::Unsigned: return "a non-negative integer";
    case KeyType::Bool: return "a boolean";
    case KeyType::Text: return "a string";
    case KeyType::UnsignedList: return "a list of non-negative integers";
    case KeyType::RationalList: return "a list of rational numbers";
    default: return "an integer";
    }
}

} // namespace detail

/// Parses TOML-style `key = value` text: one setting per line, `#` comments, quoted
/// strings, `[a, b]` lists. Unknown and duplicate keys are errors. Every problem is
/// reported with its line number.
inline RawSettings parse_config_text(std::string_view text, std::vector<std::string>& errors) {
    RawSettings out;
    std::stringstream ss{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        // strip comments outside quotes
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            if (line[i] == '#' && !in_quote) {
                line.resize(i);
                break;
            }
        }
        std::string body = detail::trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected 'key = value'");
            continue;
        }
        std::string key = detail::trim(body.substr(0, eq));
        std::string value = detail::unquote(detail::trim(body.substr(eq + 1)));
        if (key.empty()) {
            errors.push_back(where + ": missing key");
            continue;
        }
        if (!find_key(key)) {
            errors.push_back(where + ": unknown key '" + key + "'");
            continue;
        }
        if (out.count(key)) {
            errors.push_back(where + ": duplicate key '" + key + "' (first set on " + out[key].origin + ")");
            continue;
        }
        out[key] = {value, where};
    }
    return out;
}

/// Layers defaults, file settings and flag overrides (flags win), converts every value to
/// its type and checks all constraints. Either every setting is accepted or the
/// full list of errors is returned; each error names its key.
inline ValidationResult validate(std::string_view file_text, const RawSettings& overrides = {},
                                 std::optional<Command> command = std::nullopt, const RawSettings& defaults = {}) {
    ValidationResult res;
    RawSettings settings = defaults;
    for (auto& [k, v] : parse_config_text(file_text, res.errors)) settings[k] = std::move(v);
    for (const auto& [k, v] : overrides) {
        if (!find_key(k)) {
            res.errors.push_back(v.origin + ": unknown key '" + k + "'");
            continue;
        }
        settings[k] = v;
    }

    RunConfig c;
    std::set<std::string> bad_keys;
    auto fail = [&](const std::string& key, const std::string& msg) {
        bad_keys.insert(key);
        auto it = settings.find(key);
        std::string origin = it != settings.end() ? it->second.origin + ": " : std::string();
        res.errors.push_back(origin + key + ": " + msg);
    };

    for (const auto& [key, raw] : settings) {
        const KeySpec* spec = find_key(key);
        if (!spec) continue;
        try {
            const std::string& v = raw.text;
            if (key == "command") {
                auto cmd = parse_command(v);
                if (!cmd) throw DomainError("unknown command '" + v + "'");
                if (!command) command = cmd;
            } else if (key == "tau") {
                c.params.tau = parse_rational(v);
                c.tau_given = true;
            } else if (key == "y") {
                c.params.y = parse_rational(v);
            } else if (key == "alpha") {
                c.params.alpha = parse_rational(v);
            } else if (key == "beta1") {
                c.params.beta1 = parse_rational(v);
            } else if (key == "beta2") {
                c.params.beta2 = parse_rational(v);
            } else if (key == "C") {
                c.params.C = parse_rational(v);
            } else if (key == "n") {
                c.n = detail::parse_unsigned(v);
            } else if (key == "n_min") {
                c.n_min = detail::parse_unsigned(v);
            } else if (key == "n_max") {
                c.n_max = detail::parse_unsigned(v);
            } else if (key == "block") {
                for (const auto& item : detail::split_list(v)) c.blocks.push_back(detail::parse_unsigned(item));
            } else if (key == "level") {
                c.level = detail::parse_unsigned(v);
            } else if (key == "kmax") {
                c.kmax = detail::parse_unsigned(v);
            } else if (key == "sigma") {
                c.sigma = parse_rational(v);
            } else if (key == "delta") {
                c.delta = parse_rational(v);
            } else if (key == "lo") {
                c.lo = parse_rational(v);
            } else if (key == "hi") {
                c.hi = parse_rational(v);
            } else if (key == "lo_open") {
                c.lo_open = detail::parse_bool(v);
            } else if (key == "hi_open") {
                c.hi_open = detail::parse_bool(v);
            } else if (key == "k") {
                c.k = cantor::detail::parse_signed_integer(detail::trim(v));
            } else if (key == "t") {
                c.t = cantor::detail::parse_signed_integer(detail::trim(v));
            } else if (key == "psi") {
                for (const auto& item : detail::split_list(v)) c.psi_table.push_back(parse_rational(item));
            } else if (key == "samples") {
                c.samples = detail::parse_unsigned(v);
            } else if (key == "seed") {
                c.seed = detail::parse_unsigned(v);
            } else if (key == "method") {
                if (v == "exact") {
                    c.method = Method::Exact;
                } else if (v == "sampled") {
                    c.method = Method::Sampled;
                } else {
                    throw DomainError("must be 'exact' or 'sampled'");
                }
            } else if (key == "max_nodes") {
                c.max_nodes = detail::parse_unsigned(v);
            } else if (key == "output") {
                c.output = v;
            } else if (key == "format") {
                if (v == "csv") {
                    c.format = Format::Csv;
                } else if (v == "json") {
                    c.format = Format::Json;
                } else {
                    throw DomainError("must be 'csv' or 'json'");
                }
            } else if (key == "precision") {
                c.precision = static_cast<mpfr_prec_t>(detail::parse_unsigned(v));
            } else if (key == "threads") {
                c.threads = static_cast<unsigned>(detail::parse_unsigned(v));
            } else if (key == "digits") {
                c.digits = static_cast<int>(detail::parse_unsigned(v));
            }
        } catch (const DomainError& e) {
            fail(key, "expected " + detail::type_name(spec->type) + ", got '" + raw.text + "' (" + e.what() + ")");
        }
    }
    if (!settings.count("format") && c.output.size() > 4 && c.output.substr(c.output.size() - 4) == ".csv") {
        c.format = Format::Csv;
    }

    // Range and cross-key checks. Skipped for keys that already failed to parse.
    auto bad = [&](const std::string& key) { return bad_keys.count(key) > 0; };
    if (!bad("alpha") && !bad("beta1") && !(c.params.alpha < c.params.beta1)) fail("alpha", "alpha must be < beta1");
    if (!bad("alpha") && c.params.alpha <= 0) fail("alpha", "must be > 0");
    if (!bad("tau") && c.params.tau < 0) fail("tau", "must be >= 0");
    if (!bad("C") && c.params.C <= 0) fail("C", "must be > 0");
    if (!bad("precision") && (c.precision < kMinPrecision || c.precision > kPrecisionCap)) {
        fail("precision", "must be in [32, 4096]");
    }
    if (!bad("threads") && c.threads < 1) fail("threads", "must be >= 1");
    if (!bad("digits") && (c.digits < 1 || c.digits > 1000)) fail("digits", "must be in [1, 1000]");
    if (!bad("n") && c.n && *c.n < 1) fail("n", "must be >= 1");
    if (!bad("n_min") && c.n_min && *c.n_min < 1) fail("n_min", "must be >= 1");
    if (c.n_min && c.n_max && *c.n_min > *c.n_max) fail("n_max", "must be >= n_min");
    if (!bad("sigma") && c.sigma && *c.sigma <= 0) fail("sigma", "must be > 0");
    if (!bad("delta") && c.delta && (*c.delta <= 0 || *c.delta > 1)) fail("delta", "must be in (0, 1]");
    if (c.lo && c.hi && *c.lo > *c.hi) fail("lo", "must be <= hi");
    if (!bad("samples") && c.samples < 1) fail("samples", "must be >= 1");
    if (!bad("t") && c.t == 0) fail("t", "must be nonzero");
    for (auto b : c.blocks) {
        if (b < 1) fail("block", "block starts must be >= 1");
    }
    if (!bad("psi")) {
        for (const auto& v : c.psi_table) {
            if (v < 0) fail("psi", "values must be >= 0");
        }
    }

    if (!command) {
        res.errors.push_back("command: no command given");
    } else {
        c.command = *command;
        auto need = [&](bool present, const std::string& key) {
            if (!present && !bad(key)) {
                res.errors.push_back(key + ": required by '" + std::string(command_name(*command)) + "'");
            }
        };
        const bool n_range = c.n_min.has_value() && c.n_max.has_value();
        switch (*command) {
        case Command::Measure:
            need(c.n.has_value(), "n");
            need(c.sigma.has_value(), "sigma");
            break;
        case Command::Count:
            need(c.level.has_value(), "level");
            need(c.lo.has_value(), "lo");
            need(c.hi.has_value(), "hi");
            break;
        case Command::Fourier:
            need(c.k.has_value() || c.n.has_value() || n_range, "n");
            break;
        case Command::Partition:
            need(!c.blocks.empty(), "block");
            break;
        case Command::BlockSum:
            need(!c.blocks.empty(), "block");
            need(c.tau_given, "tau");
            break;
        case Command::BcSum:
            need(c.kmax.has_value(), "kmax");
            need(c.tau_given, "tau");
            break;
        case Command::LemmaRatio:
            need(c.n.has_value(), "n");
            need(c.sigma.has_value(), "sigma");
            need(c.delta.has_value(), "delta");
            break;
        case Command::Inequalities:
            need(c.n.has_value() || n_range, "n");
            need(c.tau_given, "tau");
            break;
        case Command::Simulate:
            need(n_range, "n_min");
            need(c.tau_given || !c.psi_table.empty(), "tau");
            break;
        case Command::Constraint:
            need(c.tau_given, "tau");
            break;
        }
    }

    if (res.errors.empty()) res.config = std::move(c);
    return res;
}

} // namespace cantor::cli
