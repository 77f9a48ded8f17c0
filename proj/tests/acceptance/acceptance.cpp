// Acceptance criteria, one PASS/FAIL line each. Usage: acceptance [--full] [criterion ...]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pulseforge/error.hpp"
#include "pulseforge/evolve.hpp"
#include "pulseforge/illumination.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/pareto.hpp"
#include "pulseforge/phasing.hpp"
#include "pulseforge/waveform.hpp"

using namespace pulseforge;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

constexpr std::uint64_t kMaster = 20240601;
bool g_full = false;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double pulse_pmepr(const PulseSpec& spec, const PhaseCodeMatrix& codes, const SparsityMask& mask) {
    return pmepr(synthesize(spec, codes, uniform_weights(mask), mask));
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1
Verdict noncoded_law() {
    double worst = 0.0;
    for (std::size_t n : {2, 10, 100, 500}) {
        const PulseSpec spec{n, 1, 1e5, 20};
        worst = std::max(worst, std::abs(pulse_pmepr(spec, noncoded_phases(n, 1), SparsityMask::full(n)) - double(n)));
    }
    return {worst <= 1e-6, fmt("max |PMEPR - N| = %.2e over N in {2,10,100,500}", worst)};
}

// 2
Verdict newman_full_band() {
    const double p100 = pulse_pmepr(PulseSpec{100, 1, 1e5, 20}, newman_phases(100), SparsityMask::full(100));
    double worst = 0.0;
    for (std::size_t n = 8; n <= 512; n *= 2)
        worst = std::max(worst, pulse_pmepr(PulseSpec{n, 1, 1e5, 20}, newman_phases(n), SparsityMask::full(n)));
    return {std::abs(p100 - 1.8) <= 0.15 && worst < 2.0, fmt("N=100: %.3f; max over N=8..512: %.3f", p100, worst)};
}

// 3
Verdict newman_sparse() {
    const PulseSpec spec{100, 1, 1e5, 20};
    const auto codes = newman_phases(100);
    auto sparse_mean = [&](double fraction, std::uint64_t stream) {
        Rng rng(mix64(kMaster, stream));
        double sum = 0.0;
        for (int i = 0; i < 1000; ++i) sum += pulse_pmepr(spec, codes, random_mask(100, fraction, rng));
        return sum / 1000.0;
    };
    const double m70 = sparse_mean(0.7, 70), m50 = sparse_mean(0.5, 50);
    return {std::abs(m70 - 4.3) <= 0.4 && std::abs(m50 - 5.2) <= 0.5,
            fmt("mean over 1000 masks: 70%% -> %.3f (4.3 +/- 0.4), 50%% -> %.3f (5.2 +/- 0.5)", m70, m50)};
}

std::vector<double> sga_runs(std::size_t bits, double fraction, std::uint64_t stream, std::vector<SparsityMask>* masks = nullptr) {
    const PulseSpec spec{100, 1, 1e5, 20};
    const evolve::GAConfig config{.population_size = 12, .generations = 400};
    std::vector<double> finals;
    for (std::size_t run = 0; run < 20; ++run) {
        Rng rng(mix64(mix64(kMaster, stream), run));
        const auto mask = fraction < 1.0 ? random_mask(100, fraction, rng) : SparsityMask::full(100);
        if (masks) masks->push_back(mask);
        const auto w = uniform_weights(mask);
        finals.push_back(evolve::sga_minimize(evolve::pmepr_fitness(spec, w), {bits, 100}, config, rng).best_fitness);
    }
    return finals;
}

// 4
Verdict sga_pmepr() {
    const double fine = median(sga_runs(18, 1.0, 4)), qpsk = median(sga_runs(2, 1.0, 42));
    return {fine <= 3.2 && qpsk <= 3.1, fmt("median of 20 runs: 18-bit %.3f (<= 3.2), QPSK %.3f (<= 3.1)", fine, qpsk)};
}

// 5
Verdict sga_sparse() {
    std::vector<SparsityMask> masks;
    const double ga = median(sga_runs(18, 0.5, 5, &masks));
    const PulseSpec spec{100, 1, 1e5, 20};
    std::vector<double> newman;
    for (const auto& m : masks) newman.push_back(pulse_pmepr(spec, newman_phases(100), m));
    const double nm = mean(newman);
    return {ga < nm, fmt("50%% sparsity, 20 masks: GA median %.3f vs Newman mean %.3f", ga, nm)};
}

// 6
Verdict nsga_improvement() {
    const PulseSpec spec{25, 4, 4e5, 20};
    const auto w = uniform_weights(SparsityMask::full(25));
    const auto objective = pareto::phase_objectives(spec, w, pareto::ObjectivePair::PmeprPslr);
    Rng rng(mix64(kMaster, 6));

    std::vector<double> rand_pmepr, rand_pslr;
    for (int i = 0; i < 40; ++i) {
        const auto codes = random_phases(25, 4, std::nullopt, rng);
        const auto e = objective(codes.values());
        rand_pmepr.push_back(e.objectives[0]);
        rand_pslr.push_back(e.objectives[1]);
    }
    pareto::Nsga2Config config;
    config.ga.population_size = 40;
    config.ga.generations = 10000;
    config.snapshot_every = 0;
    const auto result = pareto::nsga2(objective, 100, config, {}, rng);
    double best_pmepr = INFINITY, best_pslr = INFINITY;
    for (const auto& r : result.archive.records) {
        best_pmepr = std::min(best_pmepr, r.objectives[0]);
        best_pslr = std::min(best_pslr, r.objectives[1]);
    }
    const double d_pslr = mean(rand_pslr) - best_pslr;
    const double d_pmepr = to_db10(mean(rand_pmepr)) - to_db10(best_pmepr);
    return {d_pslr >= 5.0 && d_pmepr >= 2.5,
            fmt("10000 generations: PSLR +%.2f dB (>= 5), PMEPR +%.2f dB (>= 2.5), front size %zu", d_pslr, d_pmepr,
                result.archive.records.size())};
}

// 7
Verdict constrained() {
    const std::size_t runs = g_full ? 100 : 20;
    const std::size_t reference_runs = g_full ? 20 : 5;
    const PulseSpec spec{100, 1, 1e5, 20};
    const auto w = uniform_weights(SparsityMask::full(100));
    const auto objective = pareto::phase_objectives(spec, w, pareto::ObjectivePair::PslrIslr);
    pareto::Nsga2Config config;
    config.ga.population_size = 40;
    config.ga.generations = 1000;
    config.snapshot_every = 0;
    const pareto::ConstraintSpec constraint{5.0};

    std::size_t compliant = 0;
    double c_lo = INFINITY, c_hi = -INFINITY;
    for (std::size_t run = 0; run < runs; ++run) {
        Rng rng(mix64(mix64(kMaster, 7), run));
        const auto r = pareto::nsga2(objective, 100, config, constraint, rng);
        const bool ok = std::none_of(r.final_population.begin(), r.final_population.end(),
                                     [&](const auto& x) { return constraint.violated_by(x.pmepr); });
        if (!ok) continue;
        ++compliant;
        for (const auto& x : r.archive.records) {
            c_lo = std::min(c_lo, x.objectives[1]);
            c_hi = std::max(c_hi, x.objectives[1]);
        }
    }
    double u_lo = INFINITY, u_hi = -INFINITY;
    for (std::size_t run = 0; run < reference_runs; ++run) {
        Rng rng(mix64(mix64(kMaster, 77), run));
        const auto r = pareto::nsga2(objective, 100, config, {}, rng);
        for (const auto& x : r.archive.records) {
            u_lo = std::min(u_lo, x.objectives[1]);
            u_hi = std::max(u_hi, x.objectives[1]);
        }
    }
    const std::size_t needed = g_full ? 20 : 3;
    const bool overlap = compliant > 0 && c_lo <= u_hi && u_lo <= c_hi;
    return {compliant >= needed && overlap,
            fmt("%zu/%zu runs fully compliant (need >= %zu); ISLR compliant [%.2f, %.2f] vs unconstrained [%.2f, %.2f] dB%s",
                compliant, runs, needed, c_lo, c_hi, u_lo, u_hi, g_full ? "" : " (desk-scale; --full for 100 runs)")};
}

// 8
Verdict threshold() {
    auto derive = [](std::size_t n, std::uint64_t stream) {
        Rng rng(mix64(kMaster, stream));
        const PulseSpec spec{n, 1, 1e5, 20};
        const auto w = uniform_weights(SparsityMask::full(n));
        std::vector<double> samples;
        for (int i = 0; i < 1000; ++i) samples.push_back(pmepr(synthesize(spec, random_phases(n, 1, std::nullopt, rng), w)));
        return pareto::pmepr_threshold_from_distribution(samples);
    };
    const double t100 = derive(100, 8), t500 = derive(500, 85);
    return {std::abs(t100 - 5.0) <= 0.5 && std::abs(t500 - 6.5) <= 0.5,
            fmt("N=100 -> %.2f (5.0 +/- 0.5), N=500 -> %.2f (6.5 +/- 0.5)", t100, t500)};
}

// 9 and 10 share the runs.
struct IlluminationRuns {
    std::vector<illumination::IlluminationResult> results;
    double flat_gain = NAN;
    double max_phase_gap = 0.0;
};

const IlluminationRuns& illumination_runs() {
    static const IlluminationRuns runs = [] {
        IlluminationRuns out;
        const PulseSpec spec{100, 1, 20e6, 20};
        const double carrier = 9e9;
        Rng target_rng(mix64(kMaster, 9));
        const auto target = illumination::random_target(illumination::TargetBox{}, target_rng);
        const auto spectrum = illumination::normalize_reflectivity(illumination::reflectivity_spectrum(target, spec, carrier), 100);
        out.flat_gain = illumination::snr_gain_db(illumination::flat_weights(100), spectrum);
        const illumination::PipelineConfig config;
        for (std::size_t run = 0; run < 10; ++run) {
            Rng rng(mix64(mix64(kMaster, 90), run));
            auto r = illumination::two_step_pipeline(target, spec, carrier, config, rng);
            // Any unit-modulus code leaves the gain alone.
            const auto codes = random_phases(100, 1, std::nullopt, rng);
            WeightVector coded;
            for (std::size_t n = 0; n < 100; ++n) coded.values.push_back(std::abs(r.w_opt.values[n] * std::polar(1.0, codes(n, 0))));
            out.max_phase_gap = std::max({out.max_phase_gap, std::abs(r.gain_db_final - r.gain_db),
                                          std::abs(illumination::snr_gain_db(coded, spectrum) - r.gain_db)});
            out.results.push_back(std::move(r));
        }
        return out;
    }();
    return runs;
}

Verdict illumination_gain() {
    const auto& runs = illumination_runs();
    std::vector<double> gains;
    for (const auto& r : runs.results) gains.push_back(r.gain_db);
    const double g = mean(gains);
    return {g >= 2.3 && std::abs(runs.flat_gain) <= 1e-9,
            fmt("mean gain over 10 runs %.3f dB (>= 2.3; range %.2f..%.2f); flat reference %.1e dB", g,
                *std::min_element(gains.begin(), gains.end()), *std::max_element(gains.begin(), gains.end()), runs.flat_gain)};
}

Verdict pipeline_decoupling() {
    const auto& runs = illumination_runs();
    std::vector<double> improvement;
    for (const auto& r : runs.results) improvement.push_back(to_db10(r.pmepr_random_median) - to_db10(r.pmepr_final));
    const double m = mean(improvement);
    return {runs.max_phase_gap <= 1e-12 && m >= 2.0,
            fmt("gain change across phase codes %.1e dB (<= 1e-12); PMEPR improvement over random median %.2f dB (>= 2; min %.2f)",
                runs.max_phase_gap, m, *std::min_element(improvement.begin(), improvement.end()))};
}

// 11
Verdict oracles() {
    Rng rng(mix64(kMaster, 11));
    std::vector<std::string> failed;

    // FFT ACF vs direct sum.
    double acf_err = 0.0;
    for (int t = 0; t < 30; ++t) {
        const std::size_t M = 1 + uniform_index(rng, 512);
        std::vector<cplx> x(M);
        for (auto& v : x) v = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const auto fast = autocorrelation(x);
        double peak = 0.0;
        for (auto v : x) peak += std::norm(v);
        for (long m = -long(M) + 1; m < long(M); ++m) {
            cplx acc = 0.0;
            for (long p = 0; p < long(M); ++p)
                if (p + m >= 0 && p + m < long(M)) acc += x[p + m] * std::conj(x[p]);
            acf_err = std::max(acf_err, std::abs(fast.at_lag(m) - acc) / peak);
        }
    }
    if (acf_err > 1e-9) failed.push_back(fmt("acf rel err %.1e", acf_err));

    // Non-dominated sort vs brute force.
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + uniform_index(rng, 100);
        std::vector<std::vector<double>> pts(n, std::vector<double>(2));
        for (auto& p : pts)
            for (auto& v : p) v = t % 2 ? double(uniform_index(rng, 6)) : uniform01(rng);
        const auto fronts = pareto::nondominated_sort(pts);
        std::vector<std::size_t> rank(n);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (auto i : fronts[f]) rank[i] = f;
        // Rank r means: dominated by some member of rank r-1 and by nothing of rank >= r.
        for (std::size_t i = 0; i < n; ++i) {
            bool by_prev = rank[i] == 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (!pareto::dominates(pts[j], pts[i])) continue;
                if (rank[j] >= rank[i]) failed.push_back("sort: dominated within or below own front");
                by_prev |= rank[j] + 1 == rank[i];
            }
            if (!by_prev) failed.push_back("sort: rank too deep");
        }
    }

    // Population front stays mutually non-dominated on miniature runs.
    const PulseSpec small{6, 2, 1e5, 4};
    const auto w = uniform_weights(SparsityMask::full(6));
    pareto::Nsga2Config config;
    config.ga.population_size = 16;
    config.ga.generations = 30;
    bool archive_ok = true;
    for (int run = 0; run < 3; ++run) {
        pareto::nsga2(pareto::phase_objectives(small, w, pareto::ObjectivePair::PmeprPslr), 12, config, {}, rng,
                      [&](std::size_t, std::span<const pareto::MultiObjectiveRecord> pop) {
                          for (const auto& a : pop)
                              for (const auto& b : pop)
                                  if (a.rank == 0 && b.rank == 0 && pareto::dominates(a.objectives, b.objectives)) archive_ok = false;
                      });
    }
    if (!archive_ok) failed.push_back("archive domination");

    // Unit energy and global phase invariance.
    double energy_err = 0.0, phase_err = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t N = 2 + uniform_index(rng, 30), K = 1 + uniform_index(rng, 3);
        const PulseSpec spec{N, K, 1e5, 1 + uniform_index(rng, 6)};
        WeightVector wv;
        for (std::size_t n = 0; n < N; ++n) wv.values.push_back(uniform(rng, 0.05, 2.0));
        auto codes = random_phases(N, K, std::nullopt, rng);
        const auto a = synthesize(spec, codes, wv);
        energy_err = std::max(energy_err, std::abs(a.energy() - 1.0));
        for (auto& v : codes.values()) v += 0.77;
        phase_err = std::max(phase_err, std::abs(pmepr(synthesize(spec, codes, wv)) - pmepr(a)));
    }
    if (energy_err > 1e-9) failed.push_back(fmt("energy err %.1e", energy_err));
    if (phase_err > 1e-9) failed.push_back(fmt("phase invariance err %.1e", phase_err));

    // Codec bijection.
    for (std::size_t bits : {2, 18}) {
        for (int t = 0; t < 200; ++t) {
            const auto g = evolve::random_genome({bits, 20}, rng);
            if (evolve::encode_phases(evolve::decode_phases(g, 10, 2), bits).bits != g.bits) {
                failed.push_back("codec round trip");
                break;
            }
        }
    }

    std::string detail = fmt("acf rel err %.1e, energy err %.1e, phase err %.1e, sort/archive/codec checked", acf_err, energy_err, phase_err);
    if (!failed.empty()) detail += "; FAILED: " + failed.front();
    return {failed.empty(), detail};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = informational runtime only
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--full") g_full = true;
        else only.insert(std::atoi(arg.c_str()));
    }
    const std::vector<Criterion> criteria = {
        {1, "non-coded PMEPR law", 1.0, noncoded_law},
        {2, "Newman full band", 5.0, newman_full_band},
        {3, "Newman sparse degradation", 120.0, newman_sparse},
        {4, "SGA PMEPR", 0.0, sga_pmepr},
        {5, "SGA under sparsity beats Newman", 0.0, sga_sparse},
        {6, "NSGA-II improvement", 0.0, nsga_improvement},
        {7, "constrained NSGA-II", 0.0, constrained},
        {8, "threshold selection", 0.0, threshold},
        {9, "illumination gain", 0.0, illumination_gain},
        {10, "pipeline decoupling", 0.0, pipeline_decoupling},
        {11, "oracle suites", 30.0, oracles},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            v.pass = false;
            v.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        failures += !v.pass;
        std::printf("[%s] criterion %2d %-32s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
