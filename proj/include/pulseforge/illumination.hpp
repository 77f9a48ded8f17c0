#pragma once

#include <cstddef>
#include <vector>

#include "pulseforge/evolve.hpp"
#include "pulseforge/rng.hpp"
#include "pulseforge/waveform.hpp"

namespace pulseforge::illumination {

struct Scatterer {
    double reflectivity = 1.0;  // sigma_i
    double range_m = 0.0;
};

struct TargetModel {
    std::vector<Scatterer> scatterers;

    void validate() const;
};

// Rectangle of point scatterers; `length_m` runs along the line of sight.
struct TargetBox {
    double center_range_m = 10e3;
    double length_m = 10.0;
    double width_m = 5.0;
    std::size_t count = 50;
    double reflectivity = 1.0;
};

TargetModel random_target(const TargetBox& box, Rng& rng);

// Complex reflectivity sampled at f = n * df + f_c.
struct ReflectivitySpectrum {
    std::vector<cplx> values;
    double carrier_hz = 0.0;
    bool normalized = false;
};

ReflectivitySpectrum reflectivity_spectrum(const TargetModel& target, const PulseSpec& spec, double carrier_hz);

// Scales to N / sqrt(sum |s|^2), so a flat unit-energy spectrum sees unit average power.
ReflectivitySpectrum normalize_reflectivity(const ReflectivitySpectrum& spectrum, std::size_t n);

// (1/N) sum w_n^2 |s_n|^2 for unit-energy weights.
double average_power(const WeightVector& weights, const ReflectivitySpectrum& spectrum);

// Average power in dB; 0 dB for the flat spectrum.
double snr_gain_db(const WeightVector& weights, const ReflectivitySpectrum& spectrum);

WeightVector flat_weights(std::size_t n);

// Scaled copy of |s_norm| that peaks at v_u, floored at v_l.
evolve::RealGenome reflectivity_seed(const ReflectivitySpectrum& spectrum, double v_l, double v_u);

struct WeightOptimization {
    WeightVector weights;  // unit energy
    evolve::ConvergenceTrace trace;
    double seed_power = 0.0;
};

// Continuous GA over raw gains in [v_l, v_u]; every candidate is projected
// to unit energy before scoring.
WeightOptimization optimize_weights(const ReflectivitySpectrum& spectrum, double v_l, double v_u,
                                    const evolve::GAConfig& config, Rng& rng);

struct PipelineConfig {
    evolve::GAConfig weight_ga{.population_size = 20, .generations = 5000};
    double v_l = 0.01;
    double v_u = 10.0;
    evolve::GAConfig phase_ga{.population_size = 12, .generations = 600};
    std::size_t bits_per_phase = 18;
    std::size_t random_reference_draws = 101;  // random codes used for the PMEPR reference median
};

struct IlluminationResult {
    WeightVector w_opt;
    PhaseCodeMatrix a_opt;
    double gain_db = 0.0;         // from w_opt
    double gain_db_final = 0.0;   // from |w_opt * a_opt|
    double seed_gain_db = 0.0;
    double pmepr_initial = 0.0;   // best of the first phase population
    double pmepr_final = 0.0;
    double pmepr_random_median = 0.0;
    evolve::ConvergenceTrace weight_trace;
    evolve::ConvergenceTrace pmepr_trace;
    ReflectivitySpectrum normalized_spectrum;
};

// Step 1 shapes the spectrum for the target, step 2 picks phases for low
// PMEPR with the weights held fixed.
IlluminationResult two_step_pipeline(const TargetModel& target, const PulseSpec& spec, double carrier_hz,
                                     const PipelineConfig& config, Rng& rng);

}  // namespace pulseforge::illumination
