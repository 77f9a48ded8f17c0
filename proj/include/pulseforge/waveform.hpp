#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pulseforge/rng.hpp"

namespace pulseforge {

using cplx = std::complex<double>;

// Static pulse dimensions. Symbol duration is 1/subcarrier_spacing; each
// symbol is sampled n_subcarriers * oversampling times.
struct PulseSpec {
    std::size_t n_subcarriers = 1;
    std::size_t n_symbols = 1;
    double subcarrier_spacing_hz = 1.0;
    std::size_t oversampling = 20;

    double symbol_duration() const { return 1.0 / subcarrier_spacing_hz; }
    double bandwidth() const { return static_cast<double>(n_subcarriers) * subcarrier_spacing_hz; }
    std::size_t samples_per_symbol() const { return n_subcarriers * oversampling; }
    std::size_t total_samples() const { return samples_per_symbol() * n_symbols; }
    double sample_period() const { return symbol_duration() / static_cast<double>(samples_per_symbol()); }

    void validate() const;
};

// Phase arguments phi(n, k) in [0, 2pi); stored subcarrier-major (index n*K + k).
class PhaseCodeMatrix {
public:
    PhaseCodeMatrix() = default;
    PhaseCodeMatrix(std::size_t n, std::size_t k, double fill = 0.0);
    PhaseCodeMatrix(std::size_t n, std::size_t k, std::vector<double> phases);

    std::size_t n_subcarriers() const { return n_; }
    std::size_t n_symbols() const { return k_; }

    double operator()(std::size_t n, std::size_t k) const { return phases_[n * k_ + k]; }
    double& operator()(std::size_t n, std::size_t k) { return phases_[n * k_ + k]; }

    std::span<const double> values() const { return phases_; }
    std::span<double> values() { return phases_; }

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<double> phases_;
};

// Spectral amplitudes w_n >= 0.
struct WeightVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double energy() const;  // sum of w_n^2
};

// Active subcarriers; both band edges stay on.
class SparsityMask {
public:
    explicit SparsityMask(std::vector<bool> active);
    static SparsityMask full(std::size_t n);

    std::size_t size() const { return active_.size(); }
    std::size_t active_count() const;
    bool operator[](std::size_t i) const { return active_[i]; }
    const std::vector<bool>& active() const { return active_; }

private:
    std::vector<bool> active_;
};

struct SampledPulse {
    std::vector<cplx> samples;
    double sample_period_s = 0.0;
    PulseSpec spec;

    // Sum |x[p]|^2 * sample period.
    double energy() const;
};

// Samples the pulse at t_p = p t_b / (N L), one zero-padded inverse DFT per
// symbol, scaled so the discrete energy is exactly one.
SampledPulse synthesize(const PulseSpec& spec, const PhaseCodeMatrix& codes, const WeightVector& weights,
                        const SparsityMask& mask);

SampledPulse synthesize(const PulseSpec& spec, const PhaseCodeMatrix& codes, const WeightVector& weights);

WeightVector uniform_weights(const SparsityMask& mask);

// round(n * fraction) active subcarriers including both extremes; the rest
// are drawn uniformly from the interior.
SparsityMask random_mask(std::size_t n, double fraction, Rng& rng);

// Magnitude of the per-symbol spectrum used to build the pulse (w_n, masked).
std::vector<double> effective_weights(const WeightVector& weights, const SparsityMask& mask);

}  // namespace pulseforge
