// cantor-run: command-line front end for the cantor library.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cantor/cli/run.hpp"

namespace {

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream f(path, std::ios::binary);
    ok = static_cast<bool>(f);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string default_thread_count() {
    if (const char* env = std::getenv("CANTOR_THREADS"); env && *env) return env;
    return std::to_string(cantor::default_threads());
}

} // namespace

int main(int argc, char** argv) {
    using namespace cantor::cli;

    CLI::App app{"Exact and certified experiments on shrinking targets in the middle-third Cantor set"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(CANTOR_GIT_DESCRIBE));

    std::string config_path;
    std::map<std::string, std::string> flags;

    const std::map<Command, std::string> help = {
        {Command::Measure, "mu(A_n^y(sigma)) exactly"},
        {Command::Count, "restricted-digit endpoint counts at a level"},
        {Command::Fourier, "|mu-hat(k)| or |mu-hat(t 2^n)| with certified error"},
        {Command::Partition, "good/bad split of the exponents in [N, 2N]"},
        {Command::BlockSum, "block sums of target measures against their bounds"},
        {Command::BcSum, "dyadic block sums and running totals (exact or sampled)"},
        {Command::LemmaRatio, "endpoint count ratio across the scale chain"},
        {Command::Inequalities, "the four measured ratios at each n"},
        {Command::Simulate, "hit frequencies and finite-horizon survival by sampling"},
        {Command::Constraint, "certified check of the exponent constraint"},
    };

    std::map<CLI::App*, Command> subs;
    for (auto [cmd, name] : kCommandNames) {
        CLI::App* sub = app.add_subcommand(std::string(name), help.at(cmd));
        sub->add_option("--config", config_path, "TOML-style key = value file");
        for (const auto& key : kKeys) {
            if (key.name == "command") continue;
            const std::string k(key.name);
            std::string names = "--" + k;
            if (k.find('_') != std::string::npos) {
                std::string dashed = k;
                std::replace(dashed.begin(), dashed.end(), '_', '-');
                names += ",--" + dashed;
            }
            sub->add_option_function<std::string>(names, [&flags, k](const std::string& v) { flags[k] = v; },
                                                  "overrides '" + k + "'");
        }
        subs[sub] = cmd;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidationError;
    }

    Command command = Command::Constraint;
    for (auto& [sub, cmd] : subs) {
        if (sub->parsed()) command = cmd;
    }

    std::string text;
    if (!config_path.empty()) {
        bool ok = false;
        text = read_file(config_path, ok);
        if (!ok) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return kValidationError;
        }
    }

    RawSettings overrides;
    for (const auto& [k, v] : flags) overrides[k] = {v, "--" + k};
    RawSettings defaults;
    defaults["threads"] = {default_thread_count(), "CANTOR_THREADS"};

    ValidationResult v = validate(text, overrides, command, defaults);
    if (!v.ok()) {
        for (const auto& e : v.errors) std::cerr << "error: " << (config_path.empty() ? "" : config_path + " ") << e << '\n';
        return kValidationError;
    }
    return run(*v.config, std::cout, std::cerr);
}
