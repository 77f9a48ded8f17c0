#include "pulseforge/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pulseforge/error.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/parallel.hpp"

namespace pulseforge::evolve {

void GAConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0)
        fail(ErrorKind::InvalidConfig, "population size must be even and >= 2");
    if (generations < 1) fail(ErrorKind::InvalidConfig, "generations must be >= 1");
    if (!(elitism_fraction >= 0.0 && elitism_fraction < 1.0))
        fail(ErrorKind::InvalidConfig, "elitism fraction must lie in [0, 1)");
    if (binary_mutation.period_generations < 1 || binary_mutation.offspring_per_mutation < 1)
        fail(ErrorKind::InvalidConfig, "mutation period and group size must be >= 1");
    if (!(blend_low <= blend_high)) fail(ErrorKind::InvalidConfig, "blend range is empty");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        fail(ErrorKind::InvalidConfig, "mutation rate must lie in [0, 1]");
}

namespace {

template <typename Genome, typename Fn>
std::vector<double> evaluate_all(const Fn& fitness, const std::vector<Genome>& genomes, std::size_t first,
                                 std::size_t generation, std::size_t threads) {
    std::vector<double> out(genomes.size() - first);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        double f;
        try {
            if constexpr (std::is_same_v<Genome, RealGenome>)
                f = fitness(std::span<const double>(genomes[first + i].values));
            else
                f = fitness(genomes[first + i]);
        } catch (const std::exception& e) {
            fail(ErrorKind::Fitness, "generation " + std::to_string(generation) + ", individual " +
                                         std::to_string(first + i) + ": " + e.what());
        }
        if (!std::isfinite(f))
            fail(ErrorKind::Fitness, "generation " + std::to_string(generation) + ", individual " +
                                         std::to_string(first + i) + ": non-finite fitness");
        out[i] = f;
    });
    return out;
}

// Sorts population and fitness together, best first; ties keep prior order.
template <typename Genome>
void rank_population(std::vector<Genome>& pop, std::vector<double>& fit) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
    std::vector<Genome> p;
    std::vector<double> f;
    p.reserve(pop.size());
    f.reserve(pop.size());
    for (auto i : order) {
        p.push_back(std::move(pop[i]));
        f.push_back(fit[i]);
    }
    pop = std::move(p);
    fit = std::move(f);
}

TracePoint summarize(std::size_t generation, const std::vector<double>& fit) {
    const double mean = std::accumulate(fit.begin(), fit.end(), 0.0) / static_cast<double>(fit.size());
    return {generation, fit.front(), mean};
}

std::size_t elite_count(const GAConfig& config) {
    return static_cast<std::size_t>(std::lround(config.elitism_fraction * static_cast<double>(config.population_size)));
}

std::size_t parent_pool(const GAConfig& config) { return std::max<std::size_t>(2, config.population_size / 2); }

void mutate_offspring(std::vector<BinaryGenome>& offspring, const BinaryMutation& policy, Rng& rng) {
    const std::size_t group = policy.offspring_per_mutation;
    for (std::size_t start = 0; start < offspring.size(); start += group) {
        const std::size_t size = std::min(group, offspring.size() - start);
        if (size < group && uniform01(rng) >= static_cast<double>(size) / static_cast<double>(group)) continue;
        auto& child = offspring[start + uniform_index(rng, size)];
        for (std::size_t b = 0; b < policy.bits_per_mutation; ++b) child.bits[uniform_index(rng, child.bits.size())] ^= 1;
    }
}

}  // namespace

BinaryGenome random_genome(const BinaryEncoding& encoding, Rng& rng) {
    BinaryGenome g;
    g.bits_per_var = encoding.bits_per_var;
    g.bits.resize(encoding.length());
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : g.bits) b = static_cast<std::uint8_t>(bit(rng));
    return g;
}

Outcome<BinaryGenome> sga_minimize(const BinaryFitness& fitness, const BinaryEncoding& encoding,
                                   const GAConfig& config, Rng& rng) {
    config.validate();
    if (encoding.bits_per_var < 1 || encoding.bits_per_var > 63 || encoding.n_vars < 1)
        fail(ErrorKind::InvalidConfig, "encoding needs 1..63 bits per variable and >= 1 variable");
    const std::size_t P = config.population_size;
    const std::size_t length = encoding.length();

    std::vector<BinaryGenome> pop;
    pop.reserve(P);
    for (std::size_t i = 0; i < P; ++i) pop.push_back(random_genome(encoding, rng));
    auto fit = evaluate_all(fitness, pop, 0, 0, config.threads);
    rank_population(pop, fit);

    Outcome<BinaryGenome> out;
    out.trace.points.push_back(summarize(0, fit));
    out.best = pop.front();
    out.best_fitness = fit.front();

    const std::size_t elites = elite_count(config);
    const std::size_t parents = parent_pool(config);
    for (std::size_t g = 1; g <= config.generations; ++g) {
        std::vector<BinaryGenome> offspring;
        offspring.reserve(P - elites);
        for (std::size_t pair = 0; offspring.size() < P - elites; ++pair) {
            const auto& a = pop[(2 * pair) % parents];
            const auto& b = pop[(2 * pair + 1) % parents];
            const std::size_t cut = length > 1 ? 1 + uniform_index(rng, length - 1) : 0;
            BinaryGenome c1 = a, c2 = b;
            std::copy(b.bits.begin() + static_cast<std::ptrdiff_t>(cut), b.bits.end(),
                      c1.bits.begin() + static_cast<std::ptrdiff_t>(cut));
            std::copy(a.bits.begin() + static_cast<std::ptrdiff_t>(cut), a.bits.end(),
                      c2.bits.begin() + static_cast<std::ptrdiff_t>(cut));
            offspring.push_back(std::move(c1));
            if (offspring.size() < P - elites) offspring.push_back(std::move(c2));
        }
        if (g % config.binary_mutation.period_generations == 0)
            mutate_offspring(offspring, config.binary_mutation, rng);

        pop.resize(elites);
        fit.resize(elites);
        for (auto& c : offspring) pop.push_back(std::move(c));
        const auto child_fit = evaluate_all(fitness, pop, elites, g, config.threads);
        fit.insert(fit.end(), child_fit.begin(), child_fit.end());
        rank_population(pop, fit);

        out.trace.points.push_back(summarize(g, fit));
        if (fit.front() < out.best_fitness) {
            out.best = pop.front();
            out.best_fitness = fit.front();
        }
    }
    out.final_population = std::move(pop);
    out.final_fitness = std::move(fit);
    return out;
}

Outcome<RealGenome> continuous_minimize(const RealFitness& fitness, std::span<const Bounds> bounds,
                                        const GAConfig& config, std::span<const RealGenome> seeds, Rng& rng) {
    config.validate();
    const std::size_t P = config.population_size;
    const std::size_t V = bounds.size();
    if (V == 0) fail(ErrorKind::InvalidConfig, "no variables");
    for (const auto& b : bounds)
        if (!(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower < b.upper))
            fail(ErrorKind::InvalidConfig, "each variable needs finite bounds with lower < upper");
    if (seeds.size() > P) fail(ErrorKind::InvalidSeed, "more seeds than population slots");

    std::vector<RealGenome> pop;
    pop.reserve(P);
    for (const auto& s : seeds) {
        if (s.values.size() != V) fail(ErrorKind::InvalidSeed, "seed length does not match the variable count");
        for (std::size_t v = 0; v < V; ++v)
            if (!(s.values[v] >= bounds[v].lower && s.values[v] <= bounds[v].upper))
                fail(ErrorKind::InvalidSeed, "seed value " + std::to_string(v) + " lies outside its bounds");
        pop.push_back(s);
    }
    while (pop.size() < P) {
        RealGenome g;
        g.values.resize(V);
        for (std::size_t v = 0; v < V; ++v) g.values[v] = uniform(rng, bounds[v].lower, bounds[v].upper);
        pop.push_back(std::move(g));
    }
    auto fit = evaluate_all(fitness, pop, 0, 0, config.threads);
    rank_population(pop, fit);

    Outcome<RealGenome> out;
    out.trace.points.push_back(summarize(0, fit));
    out.best = pop.front();
    out.best_fitness = fit.front();

    const std::size_t elites = elite_count(config);
    const std::size_t parents = parent_pool(config);
    for (std::size_t g = 1; g <= config.generations; ++g) {
        std::vector<RealGenome> offspring;
        offspring.reserve(P - elites);
        while (offspring.size() < P - elites) {
            const std::size_t ia = uniform_index(rng, parents);
            std::size_t ib = uniform_index(rng, parents - 1);
            if (ib >= ia) ++ib;
            const auto& a = pop[ia].values;
            const auto& b = pop[ib].values;
            RealGenome c1, c2;
            c1.values.resize(V);
            c2.values.resize(V);
            for (std::size_t v = 0; v < V; ++v) {
                const double beta = uniform(rng, config.blend_low, config.blend_high);
                c1.values[v] = std::clamp(beta * a[v] + (1.0 - beta) * b[v], bounds[v].lower, bounds[v].upper);
                c2.values[v] = std::clamp((1.0 - beta) * a[v] + beta * b[v], bounds[v].lower, bounds[v].upper);
            }
            offspring.push_back(std::move(c1));
            if (offspring.size() < P - elites) offspring.push_back(std::move(c2));
        }
        for (auto& child : offspring)
            for (std::size_t v = 0; v < V; ++v)
                if (uniform01(rng) < config.mutation_rate)
                    child.values[v] = uniform(rng, bounds[v].lower, bounds[v].upper);

        pop.resize(elites);
        fit.resize(elites);
        for (auto& c : offspring) pop.push_back(std::move(c));
        const auto child_fit = evaluate_all(fitness, pop, elites, g, config.threads);
        fit.insert(fit.end(), child_fit.begin(), child_fit.end());
        rank_population(pop, fit);

        out.trace.points.push_back(summarize(g, fit));
        if (fit.front() < out.best_fitness) {
            out.best = pop.front();
            out.best_fitness = fit.front();
        }
    }
    out.final_population = std::move(pop);
    out.final_fitness = std::move(fit);
    return out;
}

PhaseCodeMatrix decode_phases(const BinaryGenome& genome, std::size_t n, std::size_t k) {
    const std::size_t b = genome.bits_per_var;
    if (b < 1 || b > 63) fail(ErrorKind::Codec, "bits per variable must lie in 1..63");
    if (genome.bits.size() != n * k * b)
        fail(ErrorKind::Codec, "genome has " + std::to_string(genome.bits.size()) + " bits, expected " +
                                   std::to_string(n * k * b));
    const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, static_cast<int>(b));
    PhaseCodeMatrix codes(n, k);
    auto phases = codes.values();
    for (std::size_t v = 0; v < n * k; ++v) {
        std::uint64_t value = 0;
        for (std::size_t i = 0; i < b; ++i) value = (value << 1) | genome.bits[v * b + i];
        phases[v] = step * static_cast<double>(value);
    }
    return codes;
}

BinaryGenome encode_phases(const PhaseCodeMatrix& codes, std::size_t bits_per_var) {
    if (bits_per_var < 1 || bits_per_var > 63) fail(ErrorKind::Codec, "bits per variable must lie in 1..63");
    const double levels = std::ldexp(1.0, static_cast<int>(bits_per_var));
    const auto modulus = static_cast<std::uint64_t>(levels);
    BinaryGenome g;
    g.bits_per_var = bits_per_var;
    const auto phases = codes.values();
    g.bits.resize(phases.size() * bits_per_var);
    for (std::size_t v = 0; v < phases.size(); ++v) {
        double turns = phases[v] / (2.0 * std::numbers::pi);
        turns -= std::floor(turns);
        const auto value = static_cast<std::uint64_t>(std::llround(turns * levels)) % modulus;
        for (std::size_t i = 0; i < bits_per_var; ++i)
            g.bits[v * bits_per_var + i] = static_cast<std::uint8_t>((value >> (bits_per_var - 1 - i)) & 1U);
    }
    return g;
}

BinaryFitness pmepr_fitness(const PulseSpec& spec, const WeightVector& weights) {
    spec.validate();
    return [spec, weights](const BinaryGenome& genome) {
        const auto codes = decode_phases(genome, spec.n_subcarriers, spec.n_symbols);
        return pmepr(synthesize(spec, codes, weights));
    };
}

}  // namespace pulseforge::evolve
