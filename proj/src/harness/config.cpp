#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pulseforge/error.hpp"
#include "pulseforge/harness.hpp"

namespace pulseforge::harness {
namespace {

using nlohmann::json;

constexpr ExperimentKind kKinds[] = {
    ExperimentKind::Dimension,   ExperimentKind::Synthesize,          ExperimentKind::Evaluate,
    ExperimentKind::OptimizePmepr, ExperimentKind::OptimizeMoo,       ExperimentKind::OptimizeConstrained,
    ExperimentKind::Illuminate,  ExperimentKind::Baseline,
};

// Reads fields out of one JSON object and rejects whatever is left over.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(ErrorKind::InvalidConfig, where() + " must be a JSON object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        if (const json* v = take(key)) {
            try {
                out = v->get<T>();
            } catch (const json::exception&) {
                fail(ErrorKind::InvalidConfig, where(key) + " has the wrong type");
            }
        }
    }

    void read_size(const char* key, std::size_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_unsigned()) fail(ErrorKind::InvalidConfig, where(key) + " must be a non-negative integer");
            out = v->get<std::size_t>();
        }
    }

    void read_u64(const char* key, std::uint64_t& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_unsigned()) fail(ErrorKind::InvalidConfig, where(key) + " must be a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void read_real(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(ErrorKind::InvalidConfig, where(key) + " must be a number");
            out = v->get<double>();
        }
    }

    const json* object(const char* key) {
        const json* v = take(key);
        if (v && !v->is_object()) fail(ErrorKind::InvalidConfig, where(key) + " must be a JSON object");
        return v;
    }

    const json* take(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string where(const char* key = nullptr) const {
        std::string p = path_.empty() ? "config" : path_;
        return key ? p + "." + key : p;
    }

    void finish() const {
        for (const auto& [key, _] : j_.items())
            if (!seen_.count(key)) fail(ErrorKind::InvalidConfig, "unknown key '" + where(key.c_str()) + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_pulse(const json& j, PulseSpec& p) {
    ObjectReader r(j, "pulse");
    r.read_size("n_subcarriers", p.n_subcarriers);
    r.read_size("n_symbols", p.n_symbols);
    r.read_real("subcarrier_spacing_hz", p.subcarrier_spacing_hz);
    r.read_size("oversampling", p.oversampling);
    r.finish();
}

void read_ga(const json& j, evolve::GAConfig& ga, const std::string& path) {
    ObjectReader r(j, path);
    r.read_size("population_size", ga.population_size);
    r.read_size("generations", ga.generations);
    r.read_real("elitism_fraction", ga.elitism_fraction);
    r.read_size("threads", ga.threads);
    r.read_real("blend_low", ga.blend_low);
    r.read_real("blend_high", ga.blend_high);
    r.read_real("mutation_rate", ga.mutation_rate);
    if (const json* m = r.object("mutation")) {
        ObjectReader mr(*m, path + ".mutation");
        mr.read_size("period_generations", ga.binary_mutation.period_generations);
        mr.read_size("offspring_per_mutation", ga.binary_mutation.offspring_per_mutation);
        mr.read_size("bits_per_mutation", ga.binary_mutation.bits_per_mutation);
        mr.finish();
    }
    r.finish();
}

void read_nsga(const json& j, pareto::Nsga2Config& n) {
    ObjectReader r(j, "nsga2");
    r.read_size("population_size", n.ga.population_size);
    r.read_size("generations", n.ga.generations);
    r.read_size("threads", n.ga.threads);
    r.read_real("crossover_probability", n.crossover_probability);
    r.read_real("sbx_eta", n.sbx_eta);
    r.read_real("mutation_eta", n.mutation_eta);
    if (const json* v = r.take("mutation_probability")) {
        if (v->is_null()) n.mutation_probability.reset();
        else if (v->is_number()) n.mutation_probability = v->get<double>();
        else fail(ErrorKind::InvalidConfig, "nsga2.mutation_probability must be a number or null");
    }
    r.read_size("snapshot_every", n.snapshot_every);
    r.finish();
}

void read_illumination(const json& j, IlluminationSettings& s) {
    ObjectReader r(j, "illumination");
    r.read_real("carrier_hz", s.carrier_hz);
    r.read_real("v_l", s.pipeline.v_l);
    r.read_real("v_u", s.pipeline.v_u);
    r.read_size("bits_per_phase", s.pipeline.bits_per_phase);
    r.read_size("random_reference_draws", s.pipeline.random_reference_draws);
    if (const json* t = r.object("target")) {
        ObjectReader tr(*t, "illumination.target");
        tr.read_real("center_range_m", s.target.center_range_m);
        tr.read_real("length_m", s.target.length_m);
        tr.read_real("width_m", s.target.width_m);
        tr.read_size("count", s.target.count);
        tr.read_real("reflectivity", s.target.reflectivity);
        tr.finish();
    }
    if (const json* g = r.object("weight_ga")) read_ga(*g, s.pipeline.weight_ga, "illumination.weight_ga");
    if (const json* g = r.object("phase_ga")) read_ga(*g, s.pipeline.phase_ga, "illumination.phase_ga");
    r.finish();
}

pareto::ObjectivePair parse_objectives(const std::string& name) {
    if (name == "pmepr-pslr") return pareto::ObjectivePair::PmeprPslr;
    if (name == "pslr-islr") return pareto::ObjectivePair::PslrIslr;
    fail(ErrorKind::InvalidConfig, "objectives must be 'pmepr-pslr' or 'pslr-islr', got '" + name + "'");
}

}  // namespace

ExperimentKind parse_kind(std::string_view name) {
    for (auto k : kKinds)
        if (to_string(k) == name) return k;
    fail(ErrorKind::InvalidConfig, "unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Dimension: return "dimension";
        case ExperimentKind::Synthesize: return "synthesize";
        case ExperimentKind::Evaluate: return "evaluate";
        case ExperimentKind::OptimizePmepr: return "optimize-pmepr";
        case ExperimentKind::OptimizeMoo: return "optimize-moo";
        case ExperimentKind::OptimizeConstrained: return "optimize-constrained";
        case ExperimentKind::Illuminate: return "illuminate";
        case ExperimentKind::Baseline: return "baseline";
    }
    return "?";
}

std::span<const ExperimentKind> all_kinds() { return kKinds; }

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.pulse = PulseSpec{100, 1, 100e3, 20};
    switch (kind) {
        case ExperimentKind::OptimizePmepr:
            c.ga.population_size = 12;
            c.ga.generations = 400;
            break;
        case ExperimentKind::OptimizeMoo:
            c.pulse = PulseSpec{25, 4, 400e3, 20};
            c.nsga.ga.population_size = 40;
            c.nsga.ga.generations = 10000;
            break;
        case ExperimentKind::OptimizeConstrained:
            c.objectives = pareto::ObjectivePair::PslrIslr;
            c.nsga.ga.population_size = 40;
            c.nsga.ga.generations = 1000;
            break;
        case ExperimentKind::Illuminate:
            c.pulse = PulseSpec{100, 1, 20e6, 20};
            break;
        default:
            break;
    }
    return c;
}

ExperimentConfig parse_config(std::string_view json_text, ExperimentKind kind) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
    ExperimentConfig c = default_config(kind);
    ObjectReader r(j, "");

    if (const json* k = r.take("kind")) {
        if (!k->is_string() || parse_kind(k->get<std::string>()) != kind)
            fail(ErrorKind::InvalidConfig, "config kind does not match the subcommand '" + std::string(to_string(kind)) + "'");
    }
    if (const json* p = r.object("pulse")) read_pulse(*p, c.pulse);
    if (const json* s = r.object("scenario")) {
        design::ScenarioSpec sc;
        ObjectReader sr(*s, "scenario");
        sr.read_real("target_extent_m", sc.target_extent_m);
        sr.read_real("margin_m", sc.margin_m);
        sr.read_real("min_range_m", sc.min_range_m);
        sr.finish();
        c.scenario = sc;
    }
    if (const json* g = r.object("ga")) read_ga(*g, c.ga, "ga");
    if (const json* n = r.object("nsga2")) read_nsga(*n, c.nsga);
    r.read_real("sparsity", c.sparsity);
    r.read_size("bits_per_phase", c.bits_per_phase);
    if (const json* b = r.take("baseline")) {
        if (!b->is_string()) fail(ErrorKind::InvalidConfig, "config.baseline must be a string");
        c.baseline = parse_baseline(b->get<std::string>());
    }
    if (const json* a = r.take("alphabet")) {
        if (a->is_null()) c.alphabet.reset();
        else if (a->is_number_unsigned()) c.alphabet = a->get<std::uint64_t>();
        else fail(ErrorKind::InvalidConfig, "config.alphabet must be an integer or null");
    }
    if (const json* p = r.take("phases")) {
        if (!p->is_array()) fail(ErrorKind::InvalidConfig, "config.phases must be an array of numbers");
        for (const auto& v : *p) {
            if (!v.is_number()) fail(ErrorKind::InvalidConfig, "config.phases must be an array of numbers");
            c.phases.push_back(v.get<double>());
        }
    }
    if (const json* o = r.take("objectives")) {
        if (!o->is_string()) fail(ErrorKind::InvalidConfig, "config.objectives must be a string");
        c.objectives = parse_objectives(o->get<std::string>());
    }
    if (const json* m = r.take("pmepr_max")) {
        if (m->is_null()) c.pmepr_max.reset();
        else if (m->is_number()) c.pmepr_max = m->get<double>();
        else fail(ErrorKind::InvalidConfig, "config.pmepr_max must be a number or null");
    }
    r.read_size("threshold_samples", c.threshold_samples);
    r.read_size("random_population", c.random_population);
    if (const json* il = r.object("illumination")) read_illumination(*il, c.illumination);
    r.read_size("runs", c.runs);
    r.read_u64("seed", c.seed);
    r.read_size("workers", c.workers);
    if (const json* o = r.take("output_dir")) {
        if (!o->is_string()) fail(ErrorKind::InvalidConfig, "config.output_dir must be a string");
        c.output_dir = o->get<std::string>();
    }
    r.finish();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file, ExperimentKind kind) {
    std::ifstream in(file);
    if (!in) fail(ErrorKind::InvalidConfig, "cannot read config file '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), kind);
}

void ExperimentConfig::validate() const {
    if (runs < 1) fail(ErrorKind::InvalidConfig, "runs must be >= 1");
    if (workers < 1) fail(ErrorKind::InvalidConfig, "workers must be >= 1");
    try {
        pulse.validate();
    } catch (const Error& e) {
        fail(ErrorKind::InvalidConfig, e.what());
    }
    switch (kind) {
        case ExperimentKind::Dimension:
            if (!scenario) fail(ErrorKind::InvalidConfig, "dimension needs a 'scenario' object");
            try {
                scenario->validate();
            } catch (const Error& e) {
                fail(ErrorKind::InvalidConfig, e.what());
            }
            break;
        case ExperimentKind::Synthesize:
        case ExperimentKind::Evaluate:
            if (!phases.empty() && phases.size() != pulse.n_subcarriers * pulse.n_symbols)
                fail(ErrorKind::InvalidConfig, "phases must hold n_subcarriers * n_symbols values");
            [[fallthrough]];
        case ExperimentKind::Baseline:
            if (baseline == BaselineKind::Newman && pulse.n_symbols != 1 && phases.empty())
                fail(ErrorKind::InvalidConfig, "newman phasing is defined for single-symbol pulses");
            if (alphabet && *alphabet < 2) fail(ErrorKind::InvalidConfig, "alphabet needs at least 2 levels");
            break;
        case ExperimentKind::OptimizePmepr:
            ga.validate();
            if (bits_per_phase < 1 || bits_per_phase > 63) fail(ErrorKind::InvalidConfig, "bits_per_phase must lie in 1..63");
            break;
        case ExperimentKind::OptimizeMoo:
        case ExperimentKind::OptimizeConstrained:
            nsga.validate();
            if (pulse.n_subcarriers * pulse.n_symbols < 2)
                fail(ErrorKind::InvalidConfig, "sidelobe objectives need at least two subcarrier-symbols");
            if (pmepr_max && !(*pmepr_max > 1.0)) fail(ErrorKind::InvalidConfig, "pmepr_max must be > 1");
            if (kind == ExperimentKind::OptimizeConstrained && !pmepr_max && threshold_samples < 100)
                fail(ErrorKind::InvalidConfig, "threshold_samples must be >= 100 to derive pmepr_max");
            break;
        case ExperimentKind::Illuminate:
            illumination.pipeline.weight_ga.validate();
            illumination.pipeline.phase_ga.validate();
            if (pulse.n_symbols != 1) fail(ErrorKind::InvalidConfig, "illuminate designs a single symbol (n_symbols = 1)");
            if (!(illumination.pipeline.v_l > 0.0 && illumination.pipeline.v_l < illumination.pipeline.v_u))
                fail(ErrorKind::InvalidConfig, "illumination bounds must satisfy 0 < v_l < v_u");
            break;
    }
    if (kind != ExperimentKind::Dimension && kind != ExperimentKind::Illuminate) {
        if (!(sparsity > 0.0 && sparsity <= 1.0)) fail(ErrorKind::InvalidConfig, "sparsity must lie in (0, 1]");
        if (sparsity < 1.0 && std::lround(static_cast<double>(pulse.n_subcarriers) * sparsity) < 2)
            fail(ErrorKind::InvalidConfig, "sparsity leaves fewer than two active subcarriers");
    }
}

std::string config_reference() {
    return R"(Config file: one JSON object; every key is optional unless noted and unknown keys are rejected.
  kind                  string, must match the subcommand when present
  seed                  master seed (replica i uses mix64(seed, i)), default 0
  runs                  Monte-Carlo replicas, default 1
  workers               replicas run concurrently, default 1
  output_dir            output root, default "out"
  pulse                 {n_subcarriers, n_symbols, subcarrier_spacing_hz, oversampling}
  scenario              {target_extent_m, margin_m, min_range_m}   (required by dimension)
  ga                    {population_size, generations, elitism_fraction, threads,
                         mutation: {period_generations, offspring_per_mutation, bits_per_mutation},
                         blend_low, blend_high, mutation_rate}
  nsga2                 {population_size, generations, threads, crossover_probability, sbx_eta,
                         mutation_eta, mutation_probability, snapshot_every}
  sparsity              fraction of active subcarriers in (0, 1], default 1
  bits_per_phase        binary genome bits per phase (18 = fine PSK, 2 = QPSK), default 18
  baseline              noncoded | random | newman (synthesize, evaluate, baseline)
  alphabet              phase levels for the random baseline, null = continuous
  phases                explicit N*K phases (synthesize, evaluate)
  objectives            pmepr-pslr | pslr-islr (optimize-moo)
  pmepr_max             PMEPR ceiling for optimize-constrained; null derives it from random codes
  threshold_samples     random codes used to derive pmepr_max, default 1000
  random_population     size of the random reference cloud, default 40
  illumination          {carrier_hz, v_l, v_u, bits_per_phase, random_reference_draws,
                         target: {center_range_m, length_m, width_m, count, reflectivity},
                         weight_ga: {ga fields}, phase_ga: {ga fields}}
)";
}

}  // namespace pulseforge::harness
