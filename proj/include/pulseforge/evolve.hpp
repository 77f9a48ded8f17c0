#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pulseforge/rng.hpp"
#include "pulseforge/waveform.hpp"

namespace pulseforge::evolve {

struct BinaryEncoding {
    std::size_t bits_per_var = 18;
    std::size_t n_vars = 0;

    std::size_t length() const { return bits_per_var * n_vars; }
};

// Bits are stored one per byte, most significant bit of each variable first.
struct BinaryGenome {
    std::vector<std::uint8_t> bits;
    std::size_t bits_per_var = 18;
};

struct RealGenome {
    std::vector<double> values;
};

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
};

// One offspring in every group of `offspring_per_mutation` gets
// `bits_per_mutation` random bit flips, every `period_generations` generations.
// A trailing partial group mutates with probability size / group.
// {2, 5, 1} reproduces the sparse "one flip per five offspring every other
// generation" schedule; the default flips one bit in every offspring.
struct BinaryMutation {
    std::size_t period_generations = 1;
    std::size_t offspring_per_mutation = 1;
    std::size_t bits_per_mutation = 1;
};

struct GAConfig {
    std::size_t population_size = 12;
    std::size_t generations = 400;
    double elitism_fraction = 0.5;
    std::uint64_t seed = 0;
    std::size_t threads = 1;  // fitness evaluations per generation

    BinaryMutation binary_mutation;

    // Continuous GA: blend factor range and per-gene replacement probability.
    double blend_low = -0.1;
    double blend_high = 1.1;
    double mutation_rate = 0.2;

    void validate() const;
};

struct TracePoint {
    std::size_t generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct ConvergenceTrace {
    std::vector<TracePoint> points;
};

template <typename Genome>
struct Outcome {
    Genome best;
    double best_fitness = 0.0;
    ConvergenceTrace trace;
    std::vector<Genome> final_population;
    std::vector<double> final_fitness;
};

using BinaryFitness = std::function<double(const BinaryGenome&)>;
using RealFitness = std::function<double(std::span<const double>)>;

// Truncation-selection SGA: the better half survives, parents are paired in
// rank order and refilled by single-point crossover, sparse bit-flip mutation.
Outcome<BinaryGenome> sga_minimize(const BinaryFitness& fitness, const BinaryEncoding& encoding,
                                   const GAConfig& config, Rng& rng);

// Real-coded GA over a box; seeds are placed in the initial population and
// the rest is filled uniformly.
Outcome<RealGenome> continuous_minimize(const RealFitness& fitness, std::span<const Bounds> bounds,
                                        const GAConfig& config, std::span<const RealGenome> seeds, Rng& rng);

// Row-major mapping: variable n*k_count + k holds phi(n, k); value v of b bits -> 2 pi v / 2^b.
PhaseCodeMatrix decode_phases(const BinaryGenome& genome, std::size_t n, std::size_t k);

// Nearest lattice point for each phase.
BinaryGenome encode_phases(const PhaseCodeMatrix& codes, std::size_t bits_per_var);

BinaryGenome random_genome(const BinaryEncoding& encoding, Rng& rng);

// Fitness = PMEPR of the pulse built from the decoded phases and fixed weights.
BinaryFitness pmepr_fitness(const PulseSpec& spec, const WeightVector& weights);

}  // namespace pulseforge::evolve
