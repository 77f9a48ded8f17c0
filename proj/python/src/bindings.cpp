#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pulseforge/design.hpp"
#include "pulseforge/error.hpp"
#include "pulseforge/evolve.hpp"
#include "pulseforge/harness.hpp"
#include "pulseforge/illumination.hpp"
#include "pulseforge/metrics.hpp"
#include "pulseforge/pareto.hpp"
#include "pulseforge/phasing.hpp"
#include "pulseforge/waveform.hpp"

namespace py = pybind11;
using namespace pulseforge;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

PhaseCodeMatrix to_codes(const RealArray& phases, const PulseSpec& spec) {
    if (static_cast<std::size_t>(phases.size()) != spec.n_subcarriers * spec.n_symbols)
        fail(ErrorKind::Shape, "phases must hold n_subcarriers * n_symbols values (row-major N x K)");
    return PhaseCodeMatrix(spec.n_subcarriers, spec.n_symbols, std::vector<double>(phases.data(), phases.data() + phases.size()));
}

py::array_t<double> to_array(std::span<const double> v, std::size_t rows = 0, std::size_t cols = 0) {
    py::array_t<double> out(v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    if (rows) out.resize({rows, cols});
    return out;
}

SampledPulse make_pulse(const PulseSpec& spec, const RealArray& phases, std::optional<RealArray> weights,
                        std::optional<std::vector<bool>> mask) {
    const auto codes = to_codes(phases, spec);
    WeightVector w;
    if (weights) w.values.assign(weights->data(), weights->data() + weights->size());
    if (mask) {
        const SparsityMask m(*mask);
        if (!weights) w = uniform_weights(m);
        return synthesize(spec, codes, w, m);
    }
    if (!weights) w.values.assign(spec.n_subcarriers, 1.0);
    return synthesize(spec, codes, w);
}

py::dict report_dict(const ObjectiveReport& r) {
    py::dict d;
    d["pmepr"] = r.pmepr_linear;
    d["pslr_db"] = r.pslr_db ? py::cast(*r.pslr_db) : py::none();
    d["islr_db"] = r.islr_db ? py::cast(*r.islr_db) : py::none();
    d["oversampling"] = r.oversampling;
    return d;
}

py::list trace_list(const evolve::ConvergenceTrace& t) {
    py::list out;
    for (const auto& p : t.points) out.append(py::make_tuple(p.generation, p.best, p.mean));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pulsed-OFDM radar waveform design";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<PulseSpec>(m, "PulseSpec")
        .def(py::init([](std::size_t n, std::size_t k, double df, std::size_t L) {
                 PulseSpec s{n, k, df, L};
                 s.validate();
                 return s;
             }),
             py::arg("n_subcarriers"), py::arg("n_symbols") = 1, py::arg("subcarrier_spacing_hz") = 1e5,
             py::arg("oversampling") = 20)
        .def_readwrite("n_subcarriers", &PulseSpec::n_subcarriers)
        .def_readwrite("n_symbols", &PulseSpec::n_symbols)
        .def_readwrite("subcarrier_spacing_hz", &PulseSpec::subcarrier_spacing_hz)
        .def_readwrite("oversampling", &PulseSpec::oversampling)
        .def_property_readonly("bandwidth", &PulseSpec::bandwidth)
        .def_property_readonly("sample_period", &PulseSpec::sample_period)
        .def("__repr__", [](const PulseSpec& s) {
            return "PulseSpec(n_subcarriers=" + std::to_string(s.n_subcarriers) + ", n_symbols=" + std::to_string(s.n_symbols) +
                   ", oversampling=" + std::to_string(s.oversampling) + ")";
        });

    m.def("dimension", [](double extent, double margin, double min_range) {
        const auto d = design::dimension({extent, margin, min_range});
        py::dict out;
        out["bandwidth_hz"] = d.bandwidth_hz;
        out["max_pulse_len_s"] = d.max_pulse_len_s;
        out["max_subcarriers"] = d.max_subcarriers;
        return out;
    }, py::arg("target_extent_m"), py::arg("margin_m"), py::arg("min_range_m"));

    m.def("newman_phases", [](std::size_t n) { return to_array(newman_phases(n).values(), n, 1); }, py::arg("n"));
    m.def("noncoded_phases", [](std::size_t n, std::size_t k) { return to_array(noncoded_phases(n, k).values(), n, k); },
          py::arg("n"), py::arg("k") = 1);
    m.def("random_phases", [](std::size_t n, std::size_t k, std::optional<std::uint64_t> levels, std::uint64_t seed) {
        Rng rng(seed);
        return to_array(random_phases(n, k, levels, rng).values(), n, k);
    }, py::arg("n"), py::arg("k") = 1, py::arg("levels") = py::none(), py::arg("seed") = 0);
    m.def("random_mask", [](std::size_t n, double fraction, std::uint64_t seed) {
        Rng rng(seed);
        return random_mask(n, fraction, rng).active();
    }, py::arg("n"), py::arg("fraction"), py::arg("seed") = 0);

    m.def("synthesize", [](const PulseSpec& spec, const RealArray& phases, std::optional<RealArray> weights,
                           std::optional<std::vector<bool>> mask) {
        const auto pulse = make_pulse(spec, phases, weights, mask);
        py::array_t<cplx> out(pulse.samples.size());
        std::copy(pulse.samples.begin(), pulse.samples.end(), out.mutable_data());
        return out;
    }, py::arg("spec"), py::arg("phases"), py::arg("weights") = py::none(), py::arg("mask") = py::none(),
       "Complex baseband samples of the pulse; phases are row-major N x K.");

    m.def("pmepr", [](py::array_t<cplx, py::array::c_style | py::array::forcecast> x) {
        return pmepr(std::span<const cplx>(x.data(), x.size()));
    }, py::arg("samples"));
    m.def("autocorrelation", [](py::array_t<cplx, py::array::c_style | py::array::forcecast> x) {
        const auto acf = autocorrelation(std::span<const cplx>(x.data(), x.size()));
        py::array_t<cplx> out(acf.values.size());
        std::copy(acf.values.begin(), acf.values.end(), out.mutable_data());
        return out;
    }, py::arg("samples"), "Lags -(M-1)..(M-1).");
    m.def("evaluate", [](const PulseSpec& spec, const RealArray& phases, std::optional<RealArray> weights,
                         std::optional<std::vector<bool>> mask) { return report_dict(evaluate(make_pulse(spec, phases, weights, mask))); },
          py::arg("spec"), py::arg("phases"), py::arg("weights") = py::none(), py::arg("mask") = py::none());

    m.def("optimize_pmepr", [](const PulseSpec& spec, std::size_t bits_per_phase, std::size_t population_size,
                               std::size_t generations, double sparsity, std::uint64_t seed) {
        Rng rng(seed);
        const auto mask = sparsity < 1.0 ? random_mask(spec.n_subcarriers, sparsity, rng) : SparsityMask::full(spec.n_subcarriers);
        evolve::GAConfig config{.population_size = population_size, .generations = generations, .seed = seed};
        const auto out = evolve::sga_minimize(evolve::pmepr_fitness(spec, uniform_weights(mask)),
                                              {bits_per_phase, spec.n_subcarriers * spec.n_symbols}, config, rng);
        py::dict d;
        d["pmepr"] = out.best_fitness;
        d["phases"] = to_array(evolve::decode_phases(out.best, spec.n_subcarriers, spec.n_symbols).values(),
                               spec.n_subcarriers, spec.n_symbols);
        d["mask"] = mask.active();
        d["trace"] = trace_list(out.trace);
        return d;
    }, py::arg("spec"), py::arg("bits_per_phase") = 18, py::arg("population_size") = 12, py::arg("generations") = 400,
       py::arg("sparsity") = 1.0, py::arg("seed") = 0);

    m.def("optimize_moo", [](const PulseSpec& spec, std::string objectives, std::size_t population_size,
                             std::size_t generations, std::optional<double> pmepr_max, std::uint64_t seed) {
        Rng rng(seed);
        pareto::Nsga2Config config;
        config.ga.population_size = population_size;
        config.ga.generations = generations;
        config.snapshot_every = 0;
        pareto::ObjectivePair pair;
        if (objectives == "pmepr-pslr") pair = pareto::ObjectivePair::PmeprPslr;
        else if (objectives == "pslr-islr") pair = pareto::ObjectivePair::PslrIslr;
        else fail(ErrorKind::InvalidArgument, "objectives must be 'pmepr-pslr' or 'pslr-islr'");
        const auto w = uniform_weights(SparsityMask::full(spec.n_subcarriers));
        const auto result = pareto::nsga2(pareto::phase_objectives(spec, w, pair), spec.n_subcarriers * spec.n_symbols, config,
                                          pareto::ConstraintSpec{pmepr_max}, rng);
        py::list front;
        for (const auto& r : result.archive.records) {
            py::dict d;
            d["objectives"] = r.objectives;
            d["pmepr"] = r.pmepr;
            d["phases"] = to_array(r.genome.values, spec.n_subcarriers, spec.n_symbols);
            front.append(d);
        }
        return front;
    }, py::arg("spec"), py::arg("objectives") = "pmepr-pslr", py::arg("population_size") = 40, py::arg("generations") = 1000,
       py::arg("pmepr_max") = py::none(), py::arg("seed") = 0);

    m.def("pmepr_threshold", [](std::vector<double> samples) { return pareto::pmepr_threshold_from_distribution(samples); },
          py::arg("samples"));

    m.def("illuminate", [](const PulseSpec& spec, double carrier_hz, std::size_t weight_generations,
                           std::size_t phase_generations, std::uint64_t seed) {
        Rng rng(seed);
        const auto target = illumination::random_target(illumination::TargetBox{}, rng);
        illumination::PipelineConfig config;
        config.weight_ga.generations = weight_generations;
        config.phase_ga.generations = phase_generations;
        const auto r = illumination::two_step_pipeline(target, spec, carrier_hz, config, rng);
        py::dict d;
        d["gain_db"] = r.gain_db;
        d["pmepr_initial"] = r.pmepr_initial;
        d["pmepr_final"] = r.pmepr_final;
        d["pmepr_random_median"] = r.pmepr_random_median;
        d["w_opt"] = to_array(r.w_opt.values);
        d["phases"] = to_array(r.a_opt.values());
        std::vector<double> mag;
        for (const auto& v : r.normalized_spectrum.values) mag.push_back(std::abs(v));
        d["reflectivity"] = to_array(mag);
        return d;
    }, py::arg("spec"), py::arg("carrier_hz") = 9e9, py::arg("weight_generations") = 5000, py::arg("phase_generations") = 600,
       py::arg("seed") = 0);

    m.def("run_experiment", [](const std::string& kind, const std::string& config_json, std::filesystem::path output_dir) {
        const auto k = harness::parse_kind(kind);
        auto config = harness::parse_config(config_json, k);
        config.output_dir = std::move(output_dir);
        py::list out;
        std::vector<harness::RunResult> results;
        {
            py::gil_scoped_release release;
            results = harness::run_experiment(config);
        }
        for (const auto& r : results) {
            py::dict d;
            d["run_id"] = r.run_id;
            d["seed"] = r.seed;
            py::dict objectives;
            for (const auto& [name, value] : r.final_objectives) objectives[py::str(name)] = value;
            d["objectives"] = objectives;
            d["wall_time_s"] = r.wall_time_s;
            d["files"] = r.files;
            out.append(d);
        }
        return out;
    }, py::arg("kind"), py::arg("config_json") = "{}", py::arg("output_dir") = "out");

    m.def("config_reference", &harness::config_reference);
}
