#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pulseforge/waveform.hpp"

namespace pulseforge {

// Aperiodic autocorrelation R[m] = sum_p x[p] conj(x[p - m]) for
// m = -(M-1) .. M-1, stored with zero lag at index M-1.
struct CorrelationSeries {
    std::vector<cplx> values;

    std::size_t max_lag() const { return values.empty() ? 0 : (values.size() - 1) / 2; }
    const cplx& at_lag(long m) const { return values[static_cast<std::size_t>(static_cast<long>(max_lag()) + m)]; }
    double magnitude(long m) const { return std::sqrt(std::norm(at_lag(m))); }
};

struct ObjectiveReport {
    double pmepr_linear = 1.0;
    std::optional<double> pslr_db;  // empty when every lag falls inside the mainlobe
    std::optional<double> islr_db;
    std::size_t oversampling = 1;
};

double pmepr(std::span<const cplx> samples);
double pmepr(const SampledPulse& pulse);

// FFT-based correlation.
CorrelationSeries autocorrelation(std::span<const cplx> samples);
CorrelationSeries autocorrelation(const SampledPulse& pulse);

// Sidelobes are the lags with |tau| >= 1/B, i.e. |m| >= oversampling.
double pslr_db(const CorrelationSeries& acf, const PulseSpec& spec);
double islr_db(const CorrelationSeries& acf, const PulseSpec& spec);

struct SidelobeLevels {
    double pslr_db;
    double islr_db;
};
SidelobeLevels sidelobes(const CorrelationSeries& acf, const PulseSpec& spec);

ObjectiveReport evaluate(const SampledPulse& pulse);

inline double to_db10(double linear) { return 10.0 * std::log10(linear); }

}  // namespace pulseforge
