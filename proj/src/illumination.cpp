#include "pulseforge/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pulseforge/design.hpp"
#include "pulseforge/error.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/phasing.hpp"

namespace pulseforge::illumination {

void TargetModel::validate() const {
    if (scatterers.empty()) fail(ErrorKind::InvalidArgument, "target needs at least one scatterer");
    for (const auto& s : scatterers) {
        if (!(std::isfinite(s.reflectivity) && s.reflectivity >= 0.0))
            fail(ErrorKind::InvalidArgument, "scatterer reflectivity must be finite and >= 0");
        if (!(std::isfinite(s.range_m) && s.range_m > 0.0))
            fail(ErrorKind::InvalidArgument, "scatterer range must be finite and > 0");
    }
}

TargetModel random_target(const TargetBox& box, Rng& rng) {
    if (box.count < 1 || !(box.length_m >= 0.0) || !(box.width_m >= 0.0))
        fail(ErrorKind::InvalidArgument, "target box needs a scatterer and non-negative sides");
    TargetModel t;
    t.scatterers.reserve(box.count);
    for (std::size_t i = 0; i < box.count; ++i) {
        const double x = box.center_range_m + uniform(rng, -0.5, 0.5) * box.length_m;
        const double y = uniform(rng, -0.5, 0.5) * box.width_m;
        t.scatterers.push_back({box.reflectivity, std::hypot(x, y)});
    }
    t.validate();
    return t;
}

ReflectivitySpectrum reflectivity_spectrum(const TargetModel& target, const PulseSpec& spec, double carrier_hz) {
    target.validate();
    spec.validate();
    if (!(std::isfinite(carrier_hz) && carrier_hz >= 0.0)) fail(ErrorKind::InvalidArgument, "carrier must be >= 0");
    ReflectivitySpectrum out;
    out.carrier_hz = carrier_hz;
    out.values.assign(spec.n_subcarriers, cplx{});
    const double k = -4.0 * std::numbers::pi / design::speed_of_light;
    for (std::size_t n = 0; n < spec.n_subcarriers; ++n) {
        const double f = static_cast<double>(n) * spec.subcarrier_spacing_hz + carrier_hz;
        cplx acc{};
        for (const auto& s : target.scatterers) acc += std::polar(std::sqrt(s.reflectivity), k * f * s.range_m);
        out.values[n] = acc;
    }
    return out;
}

ReflectivitySpectrum normalize_reflectivity(const ReflectivitySpectrum& spectrum, std::size_t n) {
    if (spectrum.values.size() != n) fail(ErrorKind::Shape, "spectrum length does not match N");
    double energy = 0.0;
    for (const auto& v : spectrum.values) energy += std::norm(v);
    if (!(energy > 0.0)) fail(ErrorKind::DegenerateTarget, "reflectivity spectrum is identically zero");
    ReflectivitySpectrum out = spectrum;
    const double scale = static_cast<double>(n) / std::sqrt(energy);
    for (auto& v : out.values) v *= scale;
    out.normalized = true;
    return out;
}

double average_power(const WeightVector& weights, const ReflectivitySpectrum& spectrum) {
    if (!spectrum.normalized) fail(ErrorKind::ContractViolation, "reflectivity spectrum is not normalized");
    if (weights.size() != spectrum.values.size()) fail(ErrorKind::Shape, "weights and spectrum lengths differ");
    if (std::abs(weights.energy() - 1.0) > 1e-6)
        fail(ErrorKind::ContractViolation, "weights must have unit energy (sum w^2 = " + std::to_string(weights.energy()) + ")");
    double acc = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) acc += weights.values[n] * weights.values[n] * std::norm(spectrum.values[n]);
    return acc / static_cast<double>(weights.size());
}

double snr_gain_db(const WeightVector& weights, const ReflectivitySpectrum& spectrum) {
    return to_db10(average_power(weights, spectrum));
}

WeightVector flat_weights(std::size_t n) {
    return WeightVector{std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
}

evolve::RealGenome reflectivity_seed(const ReflectivitySpectrum& spectrum, double v_l, double v_u) {
    evolve::RealGenome g;
    g.values.reserve(spectrum.values.size());
    double peak = 0.0;
    for (const auto& v : spectrum.values) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) fail(ErrorKind::DegenerateTarget, "reflectivity spectrum is identically zero");
    for (const auto& v : spectrum.values) g.values.push_back(std::clamp(std::abs(v) / peak * v_u, v_l, v_u));
    return g;
}

namespace {

WeightVector project_unit_energy(std::span<const double> raw) {
    WeightVector w{std::vector<double>(raw.begin(), raw.end())};
    const double norm = std::sqrt(w.energy());
    for (double& v : w.values) v /= norm;
    return w;
}

}  // namespace

WeightOptimization optimize_weights(const ReflectivitySpectrum& spectrum, double v_l, double v_u,
                                    const evolve::GAConfig& config, Rng& rng) {
    if (!(v_l > 0.0 && v_l < v_u && std::isfinite(v_u)))
        fail(ErrorKind::InvalidConfig, "weight bounds must satisfy 0 < v_l < v_u");
    if (!spectrum.normalized) fail(ErrorKind::ContractViolation, "reflectivity spectrum is not normalized");
    const std::size_t n = spectrum.values.size();
    std::vector<double> power(n);
    for (std::size_t i = 0; i < n; ++i) power[i] = std::norm(spectrum.values[i]);

    // Negated average power; the raw gains are projected onto sum w^2 = 1.
    const evolve::RealFitness fitness = [&power](std::span<const double> raw) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            num += raw[i] * raw[i] * power[i];
            den += raw[i] * raw[i];
        }
        return -num / den / static_cast<double>(raw.size());
    };

    const std::vector<evolve::Bounds> bounds(n, evolve::Bounds{v_l, v_u});
    const std::vector<evolve::RealGenome> seeds{reflectivity_seed(spectrum, v_l, v_u)};
    auto outcome = evolve::continuous_minimize(fitness, bounds, config, seeds, rng);

    WeightOptimization out;
    out.weights = project_unit_energy(outcome.best.values);
    out.trace = std::move(outcome.trace);
    out.seed_power = -fitness(seeds.front().values);
    return out;
}

IlluminationResult two_step_pipeline(const TargetModel& target, const PulseSpec& spec, double carrier_hz,
                                     const PipelineConfig& config, Rng& rng) {
    if (spec.n_symbols != 1) fail(ErrorKind::InvalidConfig, "the illumination pipeline designs a single symbol");
    IlluminationResult r;
    r.normalized_spectrum = normalize_reflectivity(reflectivity_spectrum(target, spec, carrier_hz), spec.n_subcarriers);

    WeightOptimization step1;
    try {
        step1 = optimize_weights(r.normalized_spectrum, config.v_l, config.v_u, config.weight_ga, rng);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("weight optimization step: ") + e.what());
    }
    r.w_opt = std::move(step1.weights);
    r.weight_trace = std::move(step1.trace);
    r.gain_db = snr_gain_db(r.w_opt, r.normalized_spectrum);
    r.seed_gain_db = to_db10(step1.seed_power);

    evolve::Outcome<evolve::BinaryGenome> step2;
    try {
        step2 = evolve::sga_minimize(evolve::pmepr_fitness(spec, r.w_opt), {config.bits_per_phase, spec.n_subcarriers},
                                     config.phase_ga, rng);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("phase optimization step: ") + e.what());
    }
    r.a_opt = evolve::decode_phases(step2.best, spec.n_subcarriers, 1);
    r.pmepr_trace = std::move(step2.trace);
    r.pmepr_initial = r.pmepr_trace.points.front().best;
    r.pmepr_final = step2.best_fitness;

    // |w_n exp(j phi_n)| is the magnitude of the final spectrum X_opt.
    WeightVector magnitude{std::vector<double>(spec.n_subcarriers)};
    for (std::size_t n = 0; n < spec.n_subcarriers; ++n)
        magnitude.values[n] = std::abs(std::polar(r.w_opt.values[n], r.a_opt(n, 0)));
    r.gain_db_final = snr_gain_db(magnitude, r.normalized_spectrum);

    std::vector<double> reference;
    reference.reserve(config.random_reference_draws);
    for (std::size_t i = 0; i < config.random_reference_draws; ++i)
        reference.push_back(pmepr(synthesize(spec, random_phases(spec.n_subcarriers, 1, std::nullopt, rng), r.w_opt)));
    if (!reference.empty()) {
        const auto mid = reference.begin() + static_cast<std::ptrdiff_t>(reference.size() / 2);
        std::nth_element(reference.begin(), mid, reference.end());
        r.pmepr_random_median = *mid;
    }
    return r;
}

}  // namespace pulseforge::illumination
