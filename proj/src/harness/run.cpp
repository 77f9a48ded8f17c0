#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include <json.hpp>

#include "pulseforge/error.hpp"
#include "pulseforge/harness.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/parallel.hpp"

namespace pulseforge::harness {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Streams for shared (non-replica) draws.
constexpr std::uint64_t kRandomCloudStream = 0xC10D;
constexpr std::uint64_t kThresholdStream = 0x7E5;

struct Replica {
    RunResult result;
    evolve::ConvergenceTrace trace;
    std::vector<ParetoPoint> front;
    std::optional<ConstrainedFront> constrained;
    std::optional<SampledPulse> pulse;
};

void write_json(const fs::path& file, const json& j) {
    std::error_code ec;
    if (file.has_parent_path()) fs::create_directories(file.parent_path(), ec);
    std::ofstream out(file);
    if (!out) fail(ErrorKind::Io, "cannot write '" + file.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) fail(ErrorKind::Io, "write to '" + file.string() + "' failed");
}

json report_json(const ObjectiveReport& r) {
    json j;
    j["pmepr"] = r.pmepr_linear;
    j["pslr_db"] = r.pslr_db ? json(*r.pslr_db) : json(nullptr);
    j["islr_db"] = r.islr_db ? json(*r.islr_db) : json(nullptr);
    j["oversampling"] = r.oversampling;
    return j;
}

void add_report(RunResult& rr, const ObjectiveReport& r) {
    rr.final_objectives.emplace_back("pmepr", r.pmepr_linear);
    if (r.pslr_db) rr.final_objectives.emplace_back("pslr_db", *r.pslr_db);
    if (r.islr_db) rr.final_objectives.emplace_back("islr_db", *r.islr_db);
}

std::optional<SparsityMask> draw_mask(const ExperimentConfig& c, Rng& rng) {
    if (c.pulse.n_subcarriers < 2) return std::nullopt;
    if (c.sparsity >= 1.0) return SparsityMask::full(c.pulse.n_subcarriers);
    return random_mask(c.pulse.n_subcarriers, c.sparsity, rng);
}

WeightVector weights_for(const ExperimentConfig& c, const std::optional<SparsityMask>& mask) {
    return mask ? uniform_weights(*mask) : WeightVector{std::vector<double>(c.pulse.n_subcarriers, 1.0)};
}

std::vector<bool> mask_bits(const ExperimentConfig& c, const std::optional<SparsityMask>& mask) {
    return mask ? mask->active() : std::vector<bool>(c.pulse.n_subcarriers, true);
}

PhaseCodeMatrix baseline_codes(const ExperimentConfig& c, Rng& rng) {
    const auto N = c.pulse.n_subcarriers;
    const auto K = c.pulse.n_symbols;
    if (!c.phases.empty()) return PhaseCodeMatrix(N, K, c.phases);
    switch (c.baseline) {
        case BaselineKind::NonCoded: return noncoded_phases(N, K);
        case BaselineKind::Newman: return newman_phases(N);
        case BaselineKind::Random: return random_phases(N, K, c.alphabet, rng);
    }
    return noncoded_phases(N, K);
}

ParetoPoint point_for(const PulseSpec& spec, const WeightVector& w, std::span<const double> phases, std::size_t run,
                      std::size_t generation) {
    const auto pulse = synthesize(spec, PhaseCodeMatrix(spec.n_subcarriers, spec.n_symbols, {phases.begin(), phases.end()}), w);
    const auto side = sidelobes(autocorrelation(pulse), spec);
    return {pmepr(pulse), side.pslr_db, side.islr_db, run, generation};
}

void write_front_csv(const fs::path& file, const std::vector<ParetoPoint>& rows) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    std::ofstream out(file);
    if (!out) fail(ErrorKind::Io, "cannot write '" + file.string() + "'");
    out << "pmepr,pslr_db,islr_db,run_id,generation\n";
    char buf[160];
    for (const auto& p : rows) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%zu,%zu\n", p.pmepr, p.pslr_db, p.islr_db, p.run_id, p.generation);
        out << buf;
    }
    if (!out) fail(ErrorKind::Io, "write to '" + file.string() + "' failed");
}

Replica run_pulse(const ExperimentConfig& c, std::size_t run, const fs::path& dir, bool export_waveform) {
    Replica rep;
    Rng rng(rep.result.seed = replica_seed(c, run));
    const auto mask = draw_mask(c, rng);
    const auto codes = baseline_codes(c, rng);
    const auto w = weights_for(c, mask);
    auto pulse = synthesize(c.pulse, codes, w);
    const auto report = evaluate(pulse);
    add_report(rep.result, report);

    json summary = report_json(report);
    summary["active_subcarriers"] = mask ? mask->active_count() : c.pulse.n_subcarriers;
    write_json(dir / "summary.json", summary);
    rep.result.files.push_back(dir / "summary.json");
    if (export_waveform) {
        write_pulse_csv(dir / "pulse.csv", pulse);
        write_spectrum_csv(dir / "spectrum.csv", pulse);
        rep.result.files.push_back(dir / "pulse.csv");
        rep.result.files.push_back(dir / "spectrum.csv");
    }
    rep.pulse = std::move(pulse);
    return rep;
}

Replica run_baseline(const ExperimentConfig& c, std::size_t run) {
    Replica rep;
    Rng rng(rep.result.seed = replica_seed(c, run));
    const auto mask = draw_mask(c, rng);
    const auto codes = baseline_codes(c, rng);
    add_report(rep.result, evaluate(synthesize(c.pulse, codes, weights_for(c, mask))));
    return rep;
}

Replica run_optimize_pmepr(const ExperimentConfig& c, std::size_t run, const fs::path& dir) {
    Replica rep;
    Rng rng(rep.result.seed = replica_seed(c, run));
    const auto mask = draw_mask(c, rng);
    const auto w = weights_for(c, mask);
    const evolve::BinaryEncoding enc{c.bits_per_phase, c.pulse.n_subcarriers * c.pulse.n_symbols};
    auto outcome = evolve::sga_minimize(evolve::pmepr_fitness(c.pulse, w), enc, c.ga, rng);
    const auto codes = evolve::decode_phases(outcome.best, c.pulse.n_subcarriers, c.pulse.n_symbols);

    rep.result.final_objectives.emplace_back("pmepr", outcome.best_fitness);
    write_trace_csv(dir / "trace.csv", outcome.trace);
    json genome;
    genome["bits_per_phase"] = c.bits_per_phase;
    genome["phases"] = std::vector<double>(codes.values().begin(), codes.values().end());
    genome["mask"] = mask_bits(c, mask);
    write_json(dir / "genome.json", genome);
    json summary;
    summary["pmepr"] = outcome.best_fitness;
    summary["initial_best_pmepr"] = outcome.trace.points.front().best;
    summary["generations"] = c.ga.generations;
    write_json(dir / "summary.json", summary);
    rep.result.files = {dir / "trace.csv", dir / "genome.json", dir / "summary.json"};
    rep.trace = std::move(outcome.trace);
    return rep;
}

Replica run_moo(const ExperimentConfig& c, std::size_t run, const fs::path& dir, std::optional<double> threshold) {
    Replica rep;
    Rng rng(rep.result.seed = replica_seed(c, run));
    const auto mask = draw_mask(c, rng);
    const auto w = weights_for(c, mask);
    const auto pair = c.kind == ExperimentKind::OptimizeConstrained ? pareto::ObjectivePair::PslrIslr : c.objectives;
    const auto result = pareto::nsga2(pareto::phase_objectives(c.pulse, w, pair),
                                      c.pulse.n_subcarriers * c.pulse.n_symbols, c.nsga,
                                      pareto::ConstraintSpec{threshold}, rng);

    const std::size_t final_gen = c.nsga.ga.generations;
    std::vector<ParetoPoint> rows;
    for (const auto& s : result.snapshots) {
        if (s.generation == final_gen) continue;
        for (const auto& r : s.archive.records) rows.push_back(point_for(c.pulse, w, r.genome.values, run, s.generation));
    }
    json genomes = json::array();
    for (const auto& r : result.archive.records) {
        rep.front.push_back(point_for(c.pulse, w, r.genome.values, run, final_gen));
        json g;
        g["row"] = rows.size();
        g["run_id"] = run;
        g["generation"] = final_gen;
        g["phases"] = r.genome.values;
        genomes.push_back(std::move(g));
        rows.push_back(rep.front.back());
    }
    write_front_csv(dir / "front.csv", rows);
    write_json(dir / "genome.json", json{{"mask", mask_bits(c, mask)}, {"front", genomes}});

    double best_pmepr = INFINITY, best_pslr = INFINITY, best_islr = INFINITY;
    for (const auto& p : rep.front) {
        best_pmepr = std::min(best_pmepr, p.pmepr);
        best_pslr = std::min(best_pslr, p.pslr_db);
        best_islr = std::min(best_islr, p.islr_db);
    }
    rep.result.final_objectives = {{"pmepr", best_pmepr}, {"pslr_db", best_pslr}, {"islr_db", best_islr}};
    json summary;
    summary["front_size"] = rep.front.size();
    summary["best_pmepr"] = best_pmepr;
    summary["best_pslr_db"] = best_pslr;
    summary["best_islr_db"] = best_islr;
    summary["generations"] = final_gen;
    if (threshold) {
        auto violators = [&](const std::vector<pareto::MultiObjectiveRecord>& pop) {
            return static_cast<std::size_t>(std::count_if(pop.begin(), pop.end(), [&](const auto& r) { return r.pmepr > *threshold; }));
        };
        const std::size_t final_violators = violators(result.final_population);
        summary["pmepr_max"] = *threshold;
        summary["violators_initial"] = violators(result.initial_population);
        summary["violators_final"] = final_violators;
        summary["compliant"] = final_violators == 0;
        rep.result.final_objectives.emplace_back("compliant", final_violators == 0 ? 1.0 : 0.0);
        rep.constrained = ConstrainedFront{run, final_violators == 0, rep.front};
    }
    write_json(dir / "summary.json", summary);
    rep.result.files = {dir / "front.csv", dir / "genome.json", dir / "summary.json"};
    return rep;
}

Replica run_illuminate(const ExperimentConfig& c, std::size_t run, const fs::path& dir) {
    Replica rep;
    Rng rng(rep.result.seed = replica_seed(c, run));
    const auto target = illumination::random_target(c.illumination.target, rng);
    auto r = illumination::two_step_pipeline(target, c.pulse, c.illumination.carrier_hz, c.illumination.pipeline, rng);

    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream out(dir / "spectrum.csv");
        if (!out) fail(ErrorKind::Io, "cannot write spectrum.csv");
        out << "n,reflectivity_norm,w_opt\n";
        char buf[96];
        for (std::size_t n = 0; n < c.pulse.n_subcarriers; ++n) {
            std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g\n", n, std::abs(r.normalized_spectrum.values[n]), r.w_opt.values[n]);
            out << buf;
        }
    }
    write_trace_csv(dir / "trace.csv", r.pmepr_trace);
    write_trace_csv(dir / "weight_trace.csv", r.weight_trace);
    write_json(dir / "genome.json",
               json{{"w_opt", r.w_opt.values},
                    {"a_opt", std::vector<double>(r.a_opt.values().begin(), r.a_opt.values().end())}});
    json summary;
    summary["gain_db"] = r.gain_db;
    summary["seed_gain_db"] = r.seed_gain_db;
    summary["pmepr_initial"] = r.pmepr_initial;
    summary["pmepr_final"] = r.pmepr_final;
    summary["pmepr_random_median"] = r.pmepr_random_median;
    write_json(dir / "summary.json", summary);

    rep.result.final_objectives = {{"gain_db", r.gain_db}, {"pmepr_initial", r.pmepr_initial}, {"pmepr_final", r.pmepr_final}};
    rep.result.files = {dir / "spectrum.csv", dir / "trace.csv", dir / "weight_trace.csv", dir / "genome.json", dir / "summary.json"};
    rep.trace = std::move(r.pmepr_trace);
    return rep;
}

Replica run_dimension(const ExperimentConfig& c, const fs::path& dir) {
    Replica rep;
    rep.result.seed = replica_seed(c, 0);
    const auto d = design::dimension(*c.scenario);
    write_json(dir / "summary.json",
               json{{"bandwidth_hz", d.bandwidth_hz}, {"max_pulse_len_s", d.max_pulse_len_s}, {"max_subcarriers", d.max_subcarriers}});
    rep.result.final_objectives = {{"bandwidth_hz", d.bandwidth_hz},
                                   {"max_pulse_len_s", d.max_pulse_len_s},
                                   {"max_subcarriers", static_cast<double>(d.max_subcarriers)}};
    rep.result.files = {dir / "summary.json"};
    return rep;
}

std::vector<ParetoPoint> random_cloud(const ExperimentConfig& c) {
    Rng rng(mix64(c.seed, kRandomCloudStream));
    std::vector<ParetoPoint> cloud;
    const auto mask = draw_mask(c, rng);
    const auto w = weights_for(c, mask);
    for (std::size_t i = 0; i < c.random_population; ++i) {
        const auto codes = random_phases(c.pulse.n_subcarriers, c.pulse.n_symbols, std::nullopt, rng);
        cloud.push_back(point_for(c.pulse, w, codes.values(), 0, 0));
    }
    return cloud;
}

double derive_threshold(const ExperimentConfig& c) {
    Rng rng(mix64(c.seed, kThresholdStream));
    const auto mask = draw_mask(c, rng);
    const auto w = weights_for(c, mask);
    std::vector<double> samples;
    samples.reserve(c.threshold_samples);
    for (std::size_t i = 0; i < c.threshold_samples; ++i)
        samples.push_back(pmepr(synthesize(c.pulse, random_phases(c.pulse.n_subcarriers, c.pulse.n_symbols, std::nullopt, rng), w)));
    return pareto::pmepr_threshold_from_distribution(samples);
}

json stats(const std::vector<double>& v) {
    std::vector<double> s(v);
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    const double median = n % 2 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
    return json{{"mean", std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n)},
                {"median", median},
                {"min", s.front()},
                {"max", s.back()}};
}

}  // namespace

std::uint64_t replica_seed(const ExperimentConfig& config, std::size_t run_id) { return mix64(config.seed, run_id); }

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const fs::path root = config.output_dir / std::string(to_string(config.kind));
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + root.string() + "': " + ec.message());

    const std::size_t runs = config.kind == ExperimentKind::Dimension ? 1 : config.runs;
    std::optional<double> threshold = config.pmepr_max;
    if (config.kind == ExperimentKind::OptimizeConstrained && !threshold) threshold = derive_threshold(config);

    std::vector<std::optional<Replica>> replicas(runs);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    parallel_for(runs, config.workers, [&](std::size_t run) {
        const fs::path dir = root / std::to_string(run);
        const auto start = std::chrono::steady_clock::now();
        try {
            Replica rep;
            switch (config.kind) {
                case ExperimentKind::Dimension: rep = run_dimension(config, dir); break;
                case ExperimentKind::Synthesize: rep = run_pulse(config, run, dir, true); break;
                case ExperimentKind::Evaluate: rep = run_pulse(config, run, dir, false); break;
                case ExperimentKind::Baseline: rep = run_baseline(config, run); break;
                case ExperimentKind::OptimizePmepr: rep = run_optimize_pmepr(config, run, dir); break;
                case ExperimentKind::OptimizeMoo: rep = run_moo(config, run, dir, std::nullopt); break;
                case ExperimentKind::OptimizeConstrained: rep = run_moo(config, run, dir, threshold); break;
                case ExperimentKind::Illuminate: rep = run_illuminate(config, run, dir); break;
            }
            rep.result.run_id = run;
            rep.result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (config.kind != ExperimentKind::Baseline) {
                write_json(dir / "meta.json", json{{"run_id", run}, {"seed", rep.result.seed}, {"wall_time_s", rep.result.wall_time_s}});
            }
            replicas[run] = std::move(rep);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    });

    // Aggregate whatever completed, then surface the first failure.
    std::vector<RunResult> results;
    std::map<std::string, std::vector<double>> finals;
    ResultSet plots;
    for (auto& rep : replicas) {
        if (!rep) continue;
        for (const auto& [name, value] : rep->result.final_objectives) finals[name].push_back(value);
        if (!rep->trace.points.empty()) plots.traces.push_back(rep->trace);
        plots.optimized.insert(plots.optimized.end(), rep->front.begin(), rep->front.end());
        if (rep->constrained) plots.constrained.push_back(*rep->constrained);
        if (!plots.pulse && rep->pulse) plots.pulse = rep->pulse;
        results.push_back(rep->result);
    }

    json summary;
    summary["kind"] = to_string(config.kind);
    summary["seed"] = config.seed;
    summary["runs_requested"] = runs;
    summary["runs_completed"] = results.size();
    summary["partial"] = results.size() != runs;
    summary["oversampling"] = config.pulse.oversampling;
    json objectives = json::object();
    for (const auto& [name, values] : finals) objectives[name] = stats(values);
    summary["objectives"] = objectives;
    if (threshold && config.kind == ExperimentKind::OptimizeConstrained) {
        summary["pmepr_max"] = *threshold;
        summary["compliant_runs"] =
            std::count_if(plots.constrained.begin(), plots.constrained.end(), [](const auto& f) { return f.compliant; });
    }

    std::vector<fs::path> shared;
    if (config.kind == ExperimentKind::Baseline) {
        const fs::path file = root / "runs.csv";
        std::ofstream out(file);
        if (!out) fail(ErrorKind::Io, "cannot write '" + file.string() + "'");
        out << "run_id,seed,pmepr,pslr_db,islr_db\n";
        char buf[160];
        for (const auto& r : results) {
            auto get = [&](const char* key) -> double {
                for (const auto& [n, v] : r.final_objectives)
                    if (n == key) return v;
                return NAN;
            };
            std::snprintf(buf, sizeof buf, "%zu,%llu,%.10g,%.10g,%.10g\n", r.run_id, static_cast<unsigned long long>(r.seed),
                          get("pmepr"), get("pslr_db"), get("islr_db"));
            out << buf;
        }
        shared.push_back(file);
    }
    if (!plots.traces.empty()) {
        const auto f = emit_plot_data(plots, PlotKind::Convergence, root);
        shared.insert(shared.end(), f.begin(), f.end());
    }
    if (config.kind == ExperimentKind::OptimizeMoo && !plots.optimized.empty()) {
        plots.random = random_cloud(config);
        const auto f = emit_plot_data(plots, PlotKind::Pareto, root);
        shared.insert(shared.end(), f.begin(), f.end());
    }
    if (!plots.constrained.empty()) {
        const auto f = emit_plot_data(plots, PlotKind::Constrained, root);
        shared.insert(shared.end(), f.begin(), f.end());
    }
    if (plots.pulse) {
        for (auto kind : {PlotKind::Envelope, PlotKind::Spectrum}) {
            const auto f = emit_plot_data(plots, kind, root);
            shared.insert(shared.end(), f.begin(), f.end());
        }
    }
    write_json(root / "summary.json", summary);
    shared.push_back(root / "summary.json");
    for (auto& r : results)
        if (config.kind == ExperimentKind::Baseline) r.files = shared;

    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace pulseforge::harness
