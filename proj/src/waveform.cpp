#include "pulseforge/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "pulseforge/error.hpp"
#include "pulseforge/fft.hpp"

namespace pulseforge {

void PulseSpec::validate() const {
    if (n_subcarriers < 1) fail(ErrorKind::InvalidArgument, "pulse needs at least one subcarrier");
    if (n_symbols < 1) fail(ErrorKind::InvalidArgument, "pulse needs at least one symbol");
    if (oversampling < 1) fail(ErrorKind::InvalidArgument, "oversampling must be >= 1");
    if (!std::isfinite(subcarrier_spacing_hz) || subcarrier_spacing_hz <= 0.0)
        fail(ErrorKind::InvalidArgument, "subcarrier spacing must be > 0");
}

PhaseCodeMatrix::PhaseCodeMatrix(std::size_t n, std::size_t k, double fill)
    : n_(n), k_(k), phases_(n * k, fill) {}

PhaseCodeMatrix::PhaseCodeMatrix(std::size_t n, std::size_t k, std::vector<double> phases)
    : n_(n), k_(k), phases_(std::move(phases)) {
    if (phases_.size() != n * k)
        fail(ErrorKind::Shape, "phase matrix expects " + std::to_string(n * k) + " entries, got " +
                                   std::to_string(phases_.size()));
    for (double p : phases_)
        if (!std::isfinite(p)) fail(ErrorKind::InvalidArgument, "non-finite phase");
}

double WeightVector::energy() const {
    return std::inner_product(values.begin(), values.end(), values.begin(), 0.0);
}

SparsityMask::SparsityMask(std::vector<bool> active) : active_(std::move(active)) {
    if (active_.size() < 2 || !active_.front() || !active_.back())
        fail(ErrorKind::InvalidArgument, "mask must keep both extreme subcarriers on");
}

SparsityMask SparsityMask::full(std::size_t n) { return SparsityMask(std::vector<bool>(n, true)); }

std::size_t SparsityMask::active_count() const {
    return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

double SampledPulse::energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += std::norm(s);
    return e * sample_period_s;
}

std::vector<double> effective_weights(const WeightVector& weights, const SparsityMask& mask) {
    if (weights.size() != mask.size())
        fail(ErrorKind::Shape, "weights and mask lengths differ");
    std::vector<double> w(weights.values);
    for (std::size_t n = 0; n < w.size(); ++n) {
        if (!std::isfinite(w[n]) || w[n] < 0.0) fail(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
        if (!mask[n]) w[n] = 0.0;
    }
    return w;
}

namespace {

SampledPulse synthesize_effective(const PulseSpec& spec, const PhaseCodeMatrix& codes, std::span<const double> w) {
    spec.validate();
    const std::size_t N = spec.n_subcarriers;
    const std::size_t K = spec.n_symbols;
    if (codes.n_subcarriers() != N || codes.n_symbols() != K)
        fail(ErrorKind::Shape, "phase matrix shape does not match the pulse spec");
    if (w.size() != N) fail(ErrorKind::Shape, "weight vector length does not match the pulse spec");

    const double weight_energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    if (!(weight_energy > 0.0)) fail(ErrorKind::DegeneratePulse, "all effective weights are zero");

    // A = 1/sqrt(K t_b sum w^2); with t_b = M dt this is exactly unit discrete energy.
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(K) * spec.symbol_duration() * weight_energy);

    const std::size_t M = spec.samples_per_symbol();
    SampledPulse pulse;
    pulse.spec = spec;
    pulse.sample_period_s = spec.sample_period();
    pulse.samples.resize(M * K);

    std::vector<cplx> buffer(M);
    for (std::size_t k = 0; k < K; ++k) {
        std::fill(buffer.begin(), buffer.end(), cplx{});
        for (std::size_t n = 0; n < N; ++n)
            if (w[n] != 0.0) buffer[n] = std::polar(amplitude * w[n], codes(n, k));
        fft::inverse(buffer);
        std::copy(buffer.begin(), buffer.end(), pulse.samples.begin() + static_cast<std::ptrdiff_t>(k * M));
    }
    return pulse;
}

}  // namespace

SampledPulse synthesize(const PulseSpec& spec, const PhaseCodeMatrix& codes, const WeightVector& weights,
                        const SparsityMask& mask) {
    const auto w = effective_weights(weights, mask);
    return synthesize_effective(spec, codes, w);
}

SampledPulse synthesize(const PulseSpec& spec, const PhaseCodeMatrix& codes, const WeightVector& weights) {
    for (double v : weights.values)
        if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::InvalidArgument, "weights must be finite and >= 0");
    return synthesize_effective(spec, codes, weights.values);
}

WeightVector uniform_weights(const SparsityMask& mask) {
    WeightVector w;
    w.values.assign(mask.size(), 0.0);
    const double level = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, mask.active_count())));
    for (std::size_t n = 0; n < mask.size(); ++n)
        if (mask[n]) w.values[n] = level;
    return w;
}

SparsityMask random_mask(std::size_t n, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        fail(ErrorKind::InvalidArgument, "sparsity fraction must lie in (0, 1]");
    const auto active = static_cast<std::size_t>(std::lround(static_cast<double>(n) * fraction));
    if (active < 2 || n < 2)
        fail(ErrorKind::InvalidArgument, "fraction too small to keep both extreme subcarriers");

    std::vector<std::size_t> interior(n - 2);
    std::iota(interior.begin(), interior.end(), std::size_t{1});
    // Partial Fisher-Yates: first (active - 2) entries become a uniform subset.
    const std::size_t pick = active - 2;
    for (std::size_t i = 0; i < pick; ++i) {
        const std::size_t j = i + uniform_index(rng, interior.size() - i);
        std::swap(interior[i], interior[j]);
    }
    std::vector<bool> on(n, false);
    on.front() = on.back() = true;
    for (std::size_t i = 0; i < pick; ++i) on[interior[i]] = true;
    return SparsityMask(std::move(on));
}

}  // namespace pulseforge
