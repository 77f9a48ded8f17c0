#include "pulseforge/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "pulseforge/error.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/parallel.hpp"

namespace pulseforge::pareto {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double infinity = std::numeric_limits<double>::infinity();

double wrap_phase(double x) {
    x = std::fmod(x, two_pi);
    if (x < 0.0) x += two_pi;
    return x >= two_pi ? 0.0 : x;
}

std::vector<MultiObjectiveRecord> evaluate_genomes(const ObjectiveFn& objective, std::vector<evolve::RealGenome> genomes,
                                                   std::size_t generation, std::size_t threads) {
    std::vector<MultiObjectiveRecord> out(genomes.size());
    parallel_for(genomes.size(), threads, [&](std::size_t i) {
        Evaluation e;
        try {
            e = objective(genomes[i].values);
        } catch (const std::exception& ex) {
            fail(ErrorKind::Fitness, "generation " + std::to_string(generation) + ", individual " +
                                         std::to_string(i) + ": " + ex.what());
        }
        if (e.objectives.size() < 2)
            fail(ErrorKind::Fitness, "objective function must return at least two objectives");
        for (double v : e.objectives)
            if (!std::isfinite(v)) fail(ErrorKind::Fitness, "non-finite objective at generation " + std::to_string(generation));
        out[i].genome = std::move(genomes[i]);
        out[i].objectives = std::move(e.objectives);
        out[i].pmepr = e.pmepr;
    });
    return out;
}

// Assigns rank and crowding to every record and returns the fronts.
std::vector<std::vector<std::size_t>> rank_and_crowd(std::vector<MultiObjectiveRecord>& pop, const ConstraintSpec& constraint) {
    std::vector<std::vector<double>> objs;
    objs.reserve(pop.size());
    for (const auto& r : pop) objs.push_back(r.objectives);
    auto fronts = nondominated_sort(objs);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<std::vector<double>> front;
        front.reserve(fronts[f].size());
        for (auto i : fronts[f]) front.push_back(objs[i]);
        const auto crowd = crowding_distance(front);
        for (std::size_t j = 0; j < fronts[f].size(); ++j) {
            auto& r = pop[fronts[f][j]];
            r.rank = f;
            r.crowding = constraint.violated_by(r.pmepr) ? 0.0 : crowd[j];
        }
    }
    return fronts;
}

bool crowded_better(const MultiObjectiveRecord& a, const MultiObjectiveRecord& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

const MultiObjectiveRecord& tournament(const std::vector<MultiObjectiveRecord>& pop, Rng& rng) {
    const auto& a = pop[uniform_index(rng, pop.size())];
    const auto& b = pop[uniform_index(rng, pop.size())];
    if (crowded_better(a, b)) return a;
    if (crowded_better(b, a)) return b;
    return uniform01(rng) < 0.5 ? a : b;
}

void sbx(std::vector<double>& x1, std::vector<double>& x2, double eta, Rng& rng) {
    for (std::size_t v = 0; v < x1.size(); ++v) {
        if (uniform01(rng) > 0.5) continue;
        const double u = uniform01(rng);
        const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                     : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
        const double a = x1[v];
        const double b = x2[v];
        x1[v] = wrap_phase(0.5 * ((1.0 + beta) * a + (1.0 - beta) * b));
        x2[v] = wrap_phase(0.5 * ((1.0 - beta) * a + (1.0 + beta) * b));
    }
}

void polynomial_mutation(std::vector<double>& x, double eta, double probability, Rng& rng) {
    for (double& v : x) {
        if (uniform01(rng) >= probability) continue;
        const double u = uniform01(rng);
        const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
        v = wrap_phase(v + delta * two_pi);
    }
}

ParetoArchive front_of(const std::vector<MultiObjectiveRecord>& pop) {
    ParetoArchive a;
    for (const auto& r : pop)
        if (r.rank == 0) a.records.push_back(r);
    return a;
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<std::vector<double>>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0) return fronts;
    for (std::size_t i = 0; i < n; ++i) {
        if (objectives[i].size() != objectives[0].size())
            fail(ErrorKind::Shape, "objective vectors differ in length");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current)
            for (auto j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
    const std::size_t n = front.size();
    if (n <= 2) return std::vector<double>(n, infinity);
    std::vector<double> d(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < front[0].size(); ++m) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return front[a][m] < front[b][m]; });
        const double lo = front[order.front()][m];
        const double hi = front[order.back()][m];
        const double range = hi - lo;
        if (!(range > 0.0)) continue;
        d[order.front()] = infinity;
        d[order.back()] = infinity;
        for (std::size_t i = 1; i + 1 < n; ++i)
            d[order[i]] += (front[order[i + 1]][m] - front[order[i - 1]][m]) / range;
    }
    return d;
}

void Nsga2Config::validate() const {
    ga.validate();
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0))
        fail(ErrorKind::InvalidConfig, "crossover probability must lie in [0, 1]");
    if (!(sbx_eta >= 0.0) || !(mutation_eta >= 0.0))
        fail(ErrorKind::InvalidConfig, "distribution indices must be >= 0");
    if (mutation_probability && !(*mutation_probability >= 0.0 && *mutation_probability <= 1.0))
        fail(ErrorKind::InvalidConfig, "mutation probability must lie in [0, 1]");
}

Nsga2Result nsga2(const ObjectiveFn& objective, std::size_t n_vars, const Nsga2Config& config,
                  const ConstraintSpec& constraint, Rng& rng, const GenerationObserver& observer) {
    config.validate();
    if (n_vars < 1) fail(ErrorKind::InvalidConfig, "no variables");
    if (constraint.pmepr_max && !(std::isfinite(*constraint.pmepr_max) && *constraint.pmepr_max > 1.0))
        fail(ErrorKind::InvalidConfig, "PMEPR constraint must be finite and > 1");
    const std::size_t P = config.ga.population_size;
    const double p_mut = config.mutation_probability.value_or(1.0 / static_cast<double>(n_vars));

    std::vector<evolve::RealGenome> genomes(P);
    for (auto& g : genomes) {
        g.values.resize(n_vars);
        for (double& v : g.values) v = uniform(rng, 0.0, two_pi);
    }
    auto pop = evaluate_genomes(objective, std::move(genomes), 0, config.ga.threads);
    rank_and_crowd(pop, constraint);

    Nsga2Result result;
    result.initial_population = pop;
    if (observer) observer(0, pop);

    for (std::size_t g = 1; g <= config.ga.generations; ++g) {
        std::vector<evolve::RealGenome> children;
        children.reserve(P);
        while (children.size() < P) {
            auto c1 = tournament(pop, rng).genome.values;
            auto c2 = tournament(pop, rng).genome.values;
            if (uniform01(rng) < config.crossover_probability) sbx(c1, c2, config.sbx_eta, rng);
            polynomial_mutation(c1, config.mutation_eta, p_mut, rng);
            polynomial_mutation(c2, config.mutation_eta, p_mut, rng);
            children.push_back({std::move(c1)});
            if (children.size() < P) children.push_back({std::move(c2)});
        }
        auto offspring = evaluate_genomes(objective, std::move(children), g, config.ga.threads);

        std::vector<MultiObjectiveRecord> combined = std::move(pop);
        for (auto& r : offspring) combined.push_back(std::move(r));
        const auto fronts = rank_and_crowd(combined, constraint);

        pop.clear();
        pop.reserve(P);
        for (const auto& front : fronts) {
            if (pop.size() + front.size() <= P) {
                for (auto i : front) pop.push_back(std::move(combined[i]));
                continue;
            }
            std::vector<std::size_t> order(front);
            std::stable_sort(order.begin(), order.end(),
                             [&](auto a, auto b) { return combined[a].crowding > combined[b].crowding; });
            for (std::size_t j = 0; pop.size() < P; ++j) pop.push_back(std::move(combined[order[j]]));
            break;
        }

        if (observer) observer(g, pop);
        if (config.snapshot_every > 0 && (g % config.snapshot_every == 0 || g == config.ga.generations))
            result.snapshots.push_back({g, front_of(pop)});
    }
    result.archive = front_of(pop);
    result.final_population = std::move(pop);
    return result;
}

double pmepr_threshold_from_distribution(std::span<const double> samples) {
    constexpr double width = 0.5;
    if (samples.size() < 100)
        fail(ErrorKind::InsufficientData, "need at least 100 samples, got " + std::to_string(samples.size()));
    std::map<long, std::size_t> bins;
    for (double s : samples) {
        if (!std::isfinite(s)) fail(ErrorKind::InvalidArgument, "non-finite PMEPR sample");
        ++bins[static_cast<long>(std::floor(s / width))];
    }
    // First bin reaching the maximum count is the mode.
    auto mode = std::max_element(bins.begin(), bins.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    return static_cast<double>(mode->first - 1) * width;
}

ObjectiveFn phase_objectives(const PulseSpec& spec, const WeightVector& weights, ObjectivePair pair) {
    spec.validate();
    if (weights.size() != spec.n_subcarriers) fail(ErrorKind::Shape, "weight vector length does not match the pulse spec");
    return [spec, weights, pair](std::span<const double> phases) {
        PhaseCodeMatrix codes(spec.n_subcarriers, spec.n_symbols, std::vector<double>(phases.begin(), phases.end()));
        const auto pulse = synthesize(spec, codes, weights);
        const auto acf = autocorrelation(pulse);
        const auto side = sidelobes(acf, spec);
        Evaluation e;
        e.pmepr = pmepr(pulse);
        if (pair == ObjectivePair::PmeprPslr)
            e.objectives = {e.pmepr, side.pslr_db};
        else
            e.objectives = {side.pslr_db, side.islr_db};
        return e;
    };
}

}  // namespace pulseforge::pareto
