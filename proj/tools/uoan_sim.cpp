// uoan-sim: command-line front end for the opto-acoustic network simulator.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uoan/error.hpp"
#include "uoan/experiment.hpp"
#include "uoan/version.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kIoError = 2 };

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string out;
    std::uint64_t trial = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("-c,--config", o.config, "Scenario TOML file (defaults when omitted)")->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", o.overrides, "Override a config key: section.key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Master seed");
}

uoan::ExperimentConfig load(const Options& o) {
    std::vector<std::string> overrides = o.overrides;
    if (o.seed) overrides.push_back("experiment.seed=" + std::to_string(*o.seed));
    if (o.trials) overrides.push_back("experiment.trials=" + std::to_string(*o.trials));
    if (o.threads) overrides.push_back("experiment.threads=" + std::to_string(*o.threads));
    if (o.config.empty()) return uoan::parse_config("", overrides);
    return uoan::load_config(o.config, overrides);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw uoan::IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw uoan::IoError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for hybrid opto-acoustic underwater networks"};
    app.set_version_flag("--version", std::string(uoan::kToolVersion));
    app.require_subcommand(1, 1);

    Options o;

    auto* sweep = app.add_subcommand("sweep", "Run the configured parameter sweep; write CSV and manifest");
    add_common(sweep, o);
    sweep->add_option("--trials", o.trials, "Trials per sweep point")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", o.threads, "Worker threads (0 = machine parallelism)");
    sweep->add_option("-o,--out", o.out, "CSV output path; manifest goes to <out>.manifest.toml")->required();

    auto* trial = app.add_subcommand("trial", "Run one trial of the base scenario; print its record as JSON");
    add_common(trial, o);
    trial->add_option("-t,--trial", o.trial, "Trial index");
    trial->add_option("-o,--out", o.out, "Output path (stdout when omitted)");

    auto* graph = app.add_subcommand("graph", "Export one trial's routing graph as JSON");
    add_common(graph, o);
    graph->add_option("-t,--trial", o.trial, "Trial index");
    graph->add_option("-o,--out", o.out, "Output path (stdout when omitted)");

    auto* localize = app.add_subcommand("localize", "Localize one trial in every configured mode; print JSON");
    add_common(localize, o);
    localize->add_option("-t,--trial", o.trial, "Trial index");
    localize->add_option("-o,--out", o.out, "Output path (stdout when omitted)");

    auto* validate = app.add_subcommand("validate", "Check a config without running; print the resolved config");
    add_common(validate, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const uoan::ExperimentConfig cfg = load(o);
        if (sweep->parsed()) {
            uoan::run_sweep_to_file(cfg, o.out);
        } else if (trial->parsed()) {
            emit(uoan::trial_record_json(cfg, uoan::run_trial(cfg, o.trial)), o.out);
        } else if (graph->parsed()) {
            emit(uoan::trial_graph_json(cfg, o.trial), o.out);
        } else if (localize->parsed()) {
            emit(uoan::localization_json(cfg, o.trial), o.out);
        } else if (validate->parsed()) {
            std::cout << uoan::config_to_toml(cfg);
        }
    } catch (const uoan::IoError& e) {
        std::cerr << "uoan-sim: I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const uoan::ConfigError& e) {
        std::cerr << "uoan-sim: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "uoan-sim: error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
