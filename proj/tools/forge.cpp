// forge: command-line front end for the experiment harness.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulseforge/error.hpp"
#include "pulseforge/harness.hpp"

namespace fs = std::filesystem;
using namespace pulseforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> workers;
    std::optional<std::string> baseline;
};

json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::Io, "cannot read '" + file.string() + "'");
    return json::parse(in);
}

double mean_of(const std::vector<harness::RunResult>& results, const std::string& name) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : results)
        for (const auto& [key, value] : r.final_objectives)
            if (key == name) sum += value, ++count;
    return count ? sum / static_cast<double>(count) : 0.0;
}

int run(harness::ExperimentKind kind, const Overrides& o) {
    harness::ExperimentConfig config;
    try {
        config = o.config.empty() ? harness::default_config(kind) : harness::load_config(o.config, kind);
        if (o.seed) config.seed = *o.seed;
        if (o.out) config.output_dir = *o.out;
        if (o.runs) config.runs = *o.runs;
        if (o.workers) config.workers = *o.workers;
        if (o.baseline) config.baseline = parse_baseline(*o.baseline);
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "forge: config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto results = harness::run_experiment(config);
        const fs::path root = config.output_dir / std::string(harness::to_string(kind));
        json report;
        switch (kind) {
            case harness::ExperimentKind::Dimension:
                report = read_json(root / "0" / "summary.json");
                break;
            case harness::ExperimentKind::Illuminate:
                report = json{{"gain_db", mean_of(results, "gain_db")},
                              {"pmepr_initial", mean_of(results, "pmepr_initial")},
                              {"pmepr_final", mean_of(results, "pmepr_final")}};
                break;
            default:
                report = read_json(root / "summary.json");
                break;
        }
        std::cout << report.dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "forge: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidConfig ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "forge: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forge - pulsed-OFDM radar waveform design by evolutionary optimization"};
    app.require_subcommand(1);
    app.footer(harness::config_reference());

    std::map<harness::ExperimentKind, Overrides> overrides;
    for (auto kind : harness::all_kinds()) {
        const std::string name(harness::to_string(kind));
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->footer(harness::config_reference());
        auto& o = overrides[kind];
        sub->add_option("--config", o.config, "JSON experiment config (defaults apply when omitted)")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master seed (overrides config)");
        sub->add_option("--out", o.out, "output directory (overrides config)");
        sub->add_option("--runs", o.runs, "replica count (overrides config)");
        sub->add_option("--workers", o.workers, "concurrent replicas (overrides config)");
        if (kind == harness::ExperimentKind::Baseline || kind == harness::ExperimentKind::Synthesize ||
            kind == harness::ExperimentKind::Evaluate)
            sub->add_option("--baseline", o.baseline, "phase code: noncoded|random|newman");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    for (auto kind : harness::all_kinds())
        if (app.got_subcommand(std::string(harness::to_string(kind)))) return run(kind, overrides[kind]);
    return kExitConfig;
}
