#include "pulseforge/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pulseforge/error.hpp"
#include "pulseforge/fft.hpp"

namespace pulseforge {

double pmepr(std::span<const cplx> samples) {
    if (samples.empty()) fail(ErrorKind::DegeneratePulse, "empty pulse");
    double peak = 0.0;
    double total = 0.0;
    for (const auto& s : samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        total += p;
    }
    if (!(total > 0.0)) fail(ErrorKind::DegeneratePulse, "zero-energy pulse");
    return peak * static_cast<double>(samples.size()) / total;
}

double pmepr(const SampledPulse& pulse) { return pmepr(pulse.samples); }

CorrelationSeries autocorrelation(std::span<const cplx> samples) {
    CorrelationSeries acf;
    const std::size_t M = samples.size();
    if (M == 0) return acf;
    const std::size_t size = fft::next_fast_size(2 * M - 1);
    std::vector<cplx> buf(size);
    std::copy(samples.begin(), samples.end(), buf.begin());
    fft::forward(buf);
    for (auto& v : buf) v = std::norm(v);
    fft::inverse(buf);
    const double scale = 1.0 / static_cast<double>(size);

    acf.values.resize(2 * M - 1);
    // Circular index of lag m is m mod size.
    for (std::size_t i = 0; i < acf.values.size(); ++i) {
        const long m = static_cast<long>(i) - static_cast<long>(M - 1);
        const std::size_t idx = m >= 0 ? static_cast<std::size_t>(m) : size - static_cast<std::size_t>(-m);
        acf.values[i] = buf[idx] * scale;
    }
    return acf;
}

CorrelationSeries autocorrelation(const SampledPulse& pulse) { return autocorrelation(pulse.samples); }

SidelobeLevels sidelobes(const CorrelationSeries& acf, const PulseSpec& spec) {
    const long lmax = static_cast<long>(acf.max_lag());
    const long guard = static_cast<long>(spec.oversampling);
    if (acf.values.empty() || lmax < guard)
        fail(ErrorKind::UndefinedSidelobes, "no correlation lag lies outside the mainlobe");
    const double peak = acf.magnitude(0);
    if (!(peak > 0.0)) fail(ErrorKind::DegeneratePulse, "zero-energy pulse");

    double highest = 0.0;
    double sum = 0.0;
    for (long m = guard; m <= lmax; ++m) {
        // Both wings; |R[-m]| equals |R[m]| up to rounding, so sum them explicitly.
        const double a = acf.magnitude(m);
        const double b = acf.magnitude(-m);
        highest = std::max({highest, a, b});
        sum += a + b;
    }
    return {20.0 * std::log10(highest / peak), 20.0 * std::log10(sum / peak)};
}

double pslr_db(const CorrelationSeries& acf, const PulseSpec& spec) { return sidelobes(acf, spec).pslr_db; }
double islr_db(const CorrelationSeries& acf, const PulseSpec& spec) { return sidelobes(acf, spec).islr_db; }

ObjectiveReport evaluate(const SampledPulse& pulse) {
    ObjectiveReport r;
    r.pmepr_linear = pmepr(pulse);
    r.oversampling = pulse.spec.oversampling;
    const auto acf = autocorrelation(pulse);
    if (static_cast<long>(acf.max_lag()) >= static_cast<long>(pulse.spec.oversampling)) {
        const auto s = sidelobes(acf, pulse.spec);
        r.pslr_db = s.pslr_db;
        r.islr_db = s.islr_db;
    }
    return r;
}

}  // namespace pulseforge
