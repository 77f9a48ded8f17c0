#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pulseforge/evolve.hpp"
#include "pulseforge/rng.hpp"
#include "pulseforge/waveform.hpp"

namespace pulseforge::pareto {

// Minimization on every objective.
bool dominates(std::span<const double> a, std::span<const double> b);

// Fast non-dominated sort; returns fronts of indices, best front first.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<std::vector<double>>& objectives);

// Crowding distance of each member of one front. Extremes get +infinity;
// an objective with zero range inside the front contributes nothing.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front);

struct Evaluation {
    std::vector<double> objectives;
    double pmepr = 0.0;  // checked against ConstraintSpec::pmepr_max
};

using ObjectiveFn = std::function<Evaluation(std::span<const double> phases)>;

struct ConstraintSpec {
    std::optional<double> pmepr_max;

    bool violated_by(double pmepr) const { return pmepr_max && pmepr > *pmepr_max; }
};

struct Nsga2Config {
    evolve::GAConfig ga{.population_size = 40, .generations = 1000};
    double crossover_probability = 0.9;
    double sbx_eta = 15.0;
    double mutation_eta = 20.0;
    std::optional<double> mutation_probability;  // per gene; defaults to 1 / n_vars
    std::size_t snapshot_every = 100;            // 0 disables snapshots

    void validate() const;
};

struct MultiObjectiveRecord {
    evolve::RealGenome genome;
    std::vector<double> objectives;
    double pmepr = 0.0;
    std::size_t rank = 0;
    double crowding = 0.0;
};

struct ParetoArchive {
    std::vector<MultiObjectiveRecord> records;
};

struct Snapshot {
    std::size_t generation = 0;
    ParetoArchive archive;
};

struct Nsga2Result {
    ParetoArchive archive;
    std::vector<MultiObjectiveRecord> final_population;
    std::vector<MultiObjectiveRecord> initial_population;
    std::vector<Snapshot> snapshots;
};

using GenerationObserver = std::function<void(std::size_t generation, std::span<const MultiObjectiveRecord> population)>;

// NSGA-II over phases in [0, 2pi) with SBX crossover and polynomial mutation,
// both wrapped onto the circle. With a PMEPR constraint, violators have their
// crowding distance forced to 0 after sorting, before selection.
Nsga2Result nsga2(const ObjectiveFn& objective, std::size_t n_vars, const Nsga2Config& config,
                  const ConstraintSpec& constraint, Rng& rng, const GenerationObserver& observer = {});

// Histograms the samples in 0.5-wide bins and returns the left edge of the
// bin just below the modal one.
double pmepr_threshold_from_distribution(std::span<const double> samples);

enum class ObjectivePair { PmeprPslr, PslrIslr };

// (pmepr_linear, pslr_db) or (pslr_db, islr_db) of the pulse built from the phases.
ObjectiveFn phase_objectives(const PulseSpec& spec, const WeightVector& weights, ObjectivePair pair);

}  // namespace pulseforge::pareto
