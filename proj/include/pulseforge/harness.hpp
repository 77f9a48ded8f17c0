#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pulseforge/design.hpp"
#include "pulseforge/evolve.hpp"
#include "pulseforge/illumination.hpp"
#include "pulseforge/pareto.hpp"
#include "pulseforge/phasing.hpp"
#include "pulseforge/waveform.hpp"

namespace pulseforge::harness {

enum class ExperimentKind {
    Dimension,
    Synthesize,
    Evaluate,
    OptimizePmepr,
    OptimizeMoo,
    OptimizeConstrained,
    Illuminate,
    Baseline,
};

ExperimentKind parse_kind(std::string_view name);
std::string_view to_string(ExperimentKind kind);
std::span<const ExperimentKind> all_kinds();

struct IlluminationSettings {
    double carrier_hz = 9e9;
    illumination::TargetBox target;
    illumination::PipelineConfig pipeline;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::OptimizePmepr;
    PulseSpec pulse;
    std::optional<design::ScenarioSpec> scenario;
    evolve::GAConfig ga;
    pareto::Nsga2Config nsga;
    double sparsity = 1.0;
    std::size_t bits_per_phase = 18;
    BaselineKind baseline = BaselineKind::Newman;
    std::optional<std::uint64_t> alphabet;  // random baseline levels; empty = continuous
    std::vector<double> phases;             // explicit N*K phases for synthesize/evaluate
    pareto::ObjectivePair objectives = pareto::ObjectivePair::PmeprPslr;
    std::optional<double> pmepr_max;        // constrained runs; derived from random codes when empty
    std::size_t threshold_samples = 1000;
    std::size_t random_population = 40;
    IlluminationSettings illumination;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::filesystem::path output_dir = "out";

    void validate() const;
};

// Defaults for the kind, overridden by the JSON document. Unknown keys, a
// mismatching "kind" or missing kind-specific fields raise InvalidConfig.
ExperimentConfig parse_config(std::string_view json_text, ExperimentKind kind);
ExperimentConfig load_config(const std::filesystem::path& file, ExperimentKind kind);
ExperimentConfig default_config(ExperimentKind kind);

// Field reference for --help.
std::string config_reference();

struct RunResult {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> final_objectives;
    double wall_time_s = 0.0;
    std::vector<std::filesystem::path> files;
};

// Replica seed for run i is mix64(config.seed, i).
std::uint64_t replica_seed(const ExperimentConfig& config, std::size_t run_id);

// Runs every replica, writes <out>/<kind>/<run_id>/... plus an aggregate
// summary.json and plot CSVs under <out>/<kind>/.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

// Pointwise mean of per-run best values.
evolve::ConvergenceTrace aggregate(std::span<const evolve::ConvergenceTrace> traces);

struct ParetoPoint {
    double pmepr = 0.0;
    double pslr_db = 0.0;
    double islr_db = 0.0;
    std::size_t run_id = 0;
    std::size_t generation = 0;
};

struct ConstrainedFront {
    std::size_t run_id = 0;
    bool compliant = false;
    std::vector<ParetoPoint> points;
};

enum class PlotKind { Convergence, Pareto, Envelope, Spectrum, Constrained };

PlotKind parse_plot_kind(std::string_view name);

// Whatever a caller has on hand; each plot kind reads the fields it needs.
struct ResultSet {
    std::vector<evolve::ConvergenceTrace> traces;
    std::vector<ParetoPoint> optimized;
    std::vector<ParetoPoint> random;
    std::optional<SampledPulse> pulse;
    std::vector<double> spectrum_frequency_hz;
    std::vector<double> spectrum_magnitude;
    std::vector<ConstrainedFront> constrained;
};

// Writes <dir>/<kind>.csv and returns the written paths. Throws InvalidConfig
// for unknown kinds and InvalidArgument when the result set lacks the data.
std::vector<std::filesystem::path> emit_plot_data(const ResultSet& results, PlotKind kind,
                                                  const std::filesystem::path& dir);

// CSV writers shared with the CLI.
void write_trace_csv(const std::filesystem::path& file, const evolve::ConvergenceTrace& trace);
void write_pulse_csv(const std::filesystem::path& file, const SampledPulse& pulse);
void write_spectrum_csv(const std::filesystem::path& file, const SampledPulse& pulse);

}  // namespace pulseforge::harness
