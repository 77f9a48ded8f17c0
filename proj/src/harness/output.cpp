#include <cstdio>
#include <fstream>
#include <string>

#include "pulseforge/error.hpp"
#include "pulseforge/fft.hpp"
#include "pulseforge/harness.hpp"

namespace pulseforge::harness {
namespace {

std::ofstream open_for_write(const std::filesystem::path& file) {
    std::error_code ec;
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file);
    if (!out) fail(ErrorKind::Io, "cannot write '" + file.string() + "'");
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void check(const std::ofstream& out, const std::filesystem::path& file) {
    if (!out) fail(ErrorKind::Io, "write to '" + file.string() + "' failed");
}

}  // namespace

PlotKind parse_plot_kind(std::string_view name) {
    if (name == "convergence") return PlotKind::Convergence;
    if (name == "pareto") return PlotKind::Pareto;
    if (name == "envelope") return PlotKind::Envelope;
    if (name == "spectrum") return PlotKind::Spectrum;
    if (name == "constrained") return PlotKind::Constrained;
    fail(ErrorKind::InvalidConfig,
         "unknown plot kind '" + std::string(name) + "' (convergence|pareto|envelope|spectrum|constrained)");
}

void write_trace_csv(const std::filesystem::path& file, const evolve::ConvergenceTrace& trace) {
    auto out = open_for_write(file);
    out << "generation,best,mean\n";
    for (const auto& p : trace.points) out << p.generation << ',' << num(p.best) << ',' << num(p.mean) << '\n';
    check(out, file);
}

void write_pulse_csv(const std::filesystem::path& file, const SampledPulse& pulse) {
    auto out = open_for_write(file);
    out << "t_s,re,im\n";
    for (std::size_t p = 0; p < pulse.samples.size(); ++p)
        out << num(static_cast<double>(p) * pulse.sample_period_s) << ',' << num(pulse.samples[p].real()) << ','
            << num(pulse.samples[p].imag()) << '\n';
    check(out, file);
}

void write_spectrum_csv(const std::filesystem::path& file, const SampledPulse& pulse) {
    std::vector<cplx> x(pulse.samples);
    fft::forward(x);
    const double df = 1.0 / (static_cast<double>(x.size()) * pulse.sample_period_s);
    auto out = open_for_write(file);
    out << "f_hz,magnitude\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << num(static_cast<double>(i) * df) << ',' << num(std::abs(x[i]) * pulse.sample_period_s) << '\n';
    check(out, file);
}

evolve::ConvergenceTrace aggregate(std::span<const evolve::ConvergenceTrace> traces) {
    evolve::ConvergenceTrace out;
    if (traces.empty()) return out;
    const std::size_t len = traces.front().points.size();
    for (const auto& t : traces)
        if (t.points.size() != len) fail(ErrorKind::Shape, "traces have different lengths");
    out.points.resize(len);
    const auto runs = static_cast<double>(traces.size());
    for (std::size_t g = 0; g < len; ++g) {
        double best = 0.0;
        double mean = 0.0;
        for (const auto& t : traces) {
            best += t.points[g].best;
            mean += t.points[g].mean;
        }
        out.points[g] = {traces.front().points[g].generation, best / runs, mean / runs};
    }
    return out;
}

std::vector<std::filesystem::path> emit_plot_data(const ResultSet& results, PlotKind kind,
                                                  const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    switch (kind) {
        case PlotKind::Convergence: {
            if (results.traces.empty()) fail(ErrorKind::InvalidArgument, "convergence plot needs traces");
            const auto mean = aggregate(results.traces);
            const auto file = dir / "convergence.csv";
            auto out = open_for_write(file);
            out << "generation,mean_best";
            for (std::size_t r = 0; r < results.traces.size(); ++r) out << ",run_" << r;
            out << '\n';
            for (std::size_t g = 0; g < mean.points.size(); ++g) {
                out << mean.points[g].generation << ',' << num(mean.points[g].best);
                for (const auto& t : results.traces) out << ',' << num(t.points[g].best);
                out << '\n';
            }
            check(out, file);
            files.push_back(file);
            break;
        }
        case PlotKind::Pareto: {
            if (results.optimized.empty()) fail(ErrorKind::InvalidArgument, "pareto plot needs optimized points");
            const auto file = dir / "pareto.csv";
            auto out = open_for_write(file);
            out << "pmepr,pslr_db,islr_db,source\n";
            for (const auto& p : results.optimized)
                out << num(p.pmepr) << ',' << num(p.pslr_db) << ',' << num(p.islr_db) << ",optimized\n";
            for (const auto& p : results.random)
                out << num(p.pmepr) << ',' << num(p.pslr_db) << ',' << num(p.islr_db) << ",random\n";
            check(out, file);
            files.push_back(file);
            break;
        }
        case PlotKind::Envelope: {
            if (!results.pulse) fail(ErrorKind::InvalidArgument, "envelope plot needs a pulse");
            const auto file = dir / "envelope.csv";
            auto out = open_for_write(file);
            out << "t_s,magnitude\n";
            const auto& p = *results.pulse;
            for (std::size_t i = 0; i < p.samples.size(); ++i)
                out << num(static_cast<double>(i) * p.sample_period_s) << ',' << num(std::abs(p.samples[i])) << '\n';
            check(out, file);
            files.push_back(file);
            break;
        }
        case PlotKind::Spectrum: {
            const auto file = dir / "spectrum.csv";
            if (!results.spectrum_magnitude.empty()) {
                if (results.spectrum_frequency_hz.size() != results.spectrum_magnitude.size())
                    fail(ErrorKind::InvalidArgument, "spectrum frequency and magnitude lengths differ");
                auto out = open_for_write(file);
                out << "f_hz,magnitude\n";
                for (std::size_t i = 0; i < results.spectrum_magnitude.size(); ++i)
                    out << num(results.spectrum_frequency_hz[i]) << ',' << num(results.spectrum_magnitude[i]) << '\n';
                check(out, file);
            } else if (results.pulse) {
                write_spectrum_csv(file, *results.pulse);
            } else {
                fail(ErrorKind::InvalidArgument, "spectrum plot needs a pulse or spectrum samples");
            }
            files.push_back(file);
            break;
        }
        case PlotKind::Constrained: {
            if (results.constrained.empty()) fail(ErrorKind::InvalidArgument, "constrained plot needs fronts");
            const auto file = dir / "constrained.csv";
            auto out = open_for_write(file);
            out << "pslr_db,islr_db,pmepr,run_id,compliant\n";
            for (const auto& f : results.constrained)
                for (const auto& p : f.points)
                    out << num(p.pslr_db) << ',' << num(p.islr_db) << ',' << num(p.pmepr) << ',' << f.run_id << ','
                        << (f.compliant ? 1 : 0) << '\n';
            check(out, file);
            files.push_back(file);
            break;
        }
    }
    return files;
}

}  // namespace pulseforge::harness
