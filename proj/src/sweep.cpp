#include "qrsim/sweep.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrsim/csv.hpp"

namespace qrsim {

namespace {

struct Outcome {
    std::uint8_t status = 0;  // 0 success, 1 timeout, 2 prep failure
    double fidelity = 0;
    double latency_s = 0;
    std::uint64_t nonzero_syndromes = 0;
    OpCounters counters;
};

Outcome one_episode(const SimConfig& cfg, std::uint64_t seed) {
    RunRecord r = run_episode(cfg, seed);
    Outcome o;
    if (r.success)
        o.status = 0;
    else
        o.status = r.failure == EpisodeFailure::Timeout ? 1 : 2;
    o.fidelity = r.fidelity;
    o.latency_s = r.latency_s;
    o.nonzero_syndromes = r.nonzero_syndromes;
    o.counters = r.counters;
    return o;
}

BatchStats reduce_outcomes(const std::vector<Outcome>& outs) {
    BatchStats b;
    b.runs = outs.size();
    std::vector<double> fids, lats;
    fids.reserve(outs.size());
    lats.reserve(outs.size());
    for (const Outcome& o : outs) {
        b.counters += o.counters;
        b.nonzero_syndromes += o.nonzero_syndromes;
        if (o.status == 0) {
            ++b.successes;
            fids.push_back(o.fidelity);
            lats.push_back(o.latency_s);
            if (o.fidelity < 1.0) ++b.error_events;
        } else if (o.status == 1) {
            ++b.timeouts;
        } else {
            ++b.prep_failures;
        }
    }
    b.fidelity = summarize(fids);
    b.latency_s = summarize(lats);
    return b;
}

HardwareProfile quiet_hardware(const HardwareProfile& base) {
    HardwareProfile p = base;  // keeps channel efficiencies, delays, bias shape
    p.f_1q = 1.0;
    p.f_2q = 1.0;
    p.f_meas = 1.0;
    p.f_init = 1.0;
    p.f_phys = 1.0;
    p.t1 = 1e300;
    p.t2 = 1e300;
    return p;
}

double& profile_field(HardwareProfile& p, const std::string& variable) {
    if (variable == "F_1q") return p.f_1q;
    if (variable == "F_2q") return p.f_2q;
    if (variable == "F_m") return p.f_meas;
    if (variable == "F_init") return p.f_init;
    if (variable == "F_phys") return p.f_phys;
    throw std::invalid_argument("sweep: unknown variable '" + variable + "'");
}

double base_spacing_km(const SimConfig& base) {
    double d = base.topology.links.at(0).length_km;
    for (const auto& l : base.topology.links)
        if (l.length_km != d)
            throw std::invalid_argument("sweep: topology sweeps need uniform link spacing");
    return d;
}

}  // namespace

BatchStats run_batch_serial(const SimConfig& cfg, std::uint64_t runs, std::uint64_t base_seed) {
    std::vector<Outcome> outs(runs);
    for (std::uint64_t i = 0; i < runs; ++i) outs[i] = one_episode(cfg, episode_seed(base_seed, i));
    return reduce_outcomes(outs);
}

BatchStats run_batch_parallel(const SimConfig& cfg, std::uint64_t runs, std::uint64_t base_seed,
                              int jobs) {
    std::vector<Outcome> outs(runs);
#ifdef _OPENMP
    int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (std::int64_t i = 0; i < std::int64_t(runs); ++i)
        outs[i] = one_episode(cfg, episode_seed(base_seed, std::uint64_t(i)));
#else
    (void)jobs;
    for (std::uint64_t i = 0; i < runs; ++i) outs[i] = one_episode(cfg, episode_seed(base_seed, i));
#endif
    return reduce_outcomes(outs);
}

SweepKind sweep_kind_from_name(const std::string& name) {
    if (name == "single_param") return SweepKind::SingleParam;
    if (name == "z") return SweepKind::Z;
    if (name == "num_links") return SweepKind::NumLinks;
    if (name == "distance") return SweepKind::Distance;
    throw std::invalid_argument("sweep: unknown kind '" + name + "'");
}

std::string to_string(SweepKind k) {
    switch (k) {
        case SweepKind::SingleParam: return "single_param";
        case SweepKind::Z: return "z";
        case SweepKind::NumLinks: return "num_links";
        case SweepKind::Distance: return "distance";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep: grid must be strictly ascending");
    if (runs_per_point < 1) throw std::invalid_argument("sweep: runs_per_point must be >= 1");
    if (modes.empty()) throw std::invalid_argument("sweep: no protocol modes selected");
    // Reject infeasible grids before burning any cycles on episodes.
    for (double v : grid)
        for (CecMode m : modes) sweep_point_config(*this, v, m).validate();
}

SimConfig sweep_point_config(const SweepSpec& spec, double value, CecMode mode) {
    SimConfig cfg = spec.base;
    cfg.protocol.cec_mode = mode;
    switch (spec.kind) {
        case SweepKind::SingleParam: {
            cfg.hardware = quiet_hardware(spec.base.hardware);
            profile_field(cfg.hardware, spec.variable) = value;
            break;
        }
        case SweepKind::Z: {
            cfg.hardware = z_profile(value, spec.base.hardware);
            cfg.experiment.z = value;
            break;
        }
        case SweepKind::NumLinks: {
            double links = value;
            if (links < 1 || links != std::floor(links))
                throw std::invalid_argument("sweep: num_links grid must be whole links");
            double total = spec.base.topology.total_length_km();
            cfg.topology = Topology::chain(std::size_t(links) + 1, total / links);
            break;
        }
        case SweepKind::Distance: {
            double spacing = base_spacing_km(spec.base);
            double links = value / spacing;
            double rounded = std::round(links);
            if (rounded < 1 || std::abs(links - rounded) > 1e-9)
                throw std::invalid_argument(
                    "sweep: distance grid must be a whole multiple of the link spacing");
            cfg.topology = Topology::chain(std::size_t(rounded) + 1, spacing);
            break;
        }
    }
    return cfg;
}

namespace {

std::string sweep_var_name(const SweepSpec& spec) {
    switch (spec.kind) {
        case SweepKind::SingleParam: return spec.variable;
        case SweepKind::Z: return "z";
        case SweepKind::NumLinks: return "num_links";
        case SweepKind::Distance: return "total_km";
    }
    return "?";
}

}  // namespace

ResultTable run_sweep(const SweepSpec& spec, int jobs) {
    spec.validate();
    ResultTable table;
    const std::string var = sweep_var_name(spec);
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        // The batch seed ignores the mode so cec and none replay the same
        // physical trajectories.
        std::uint64_t batch_seed = episode_seed(spec.seed, gi);
        for (CecMode mode : spec.modes) {
            SimConfig cfg = sweep_point_config(spec, spec.grid[gi], mode);
            BatchStats b = run_batch_parallel(cfg, spec.runs_per_point, batch_seed, jobs);
            PointResult r;
            r.sweep_var = var;
            r.value = spec.grid[gi];
            r.mode = mode;
            r.runs = b.runs;
            r.mean_fidelity = b.fidelity.mean;
            r.stderr_fidelity = b.fidelity.se;
            r.mean_latency_s = b.latency_s.mean;
            r.failure_rate = double(b.timeouts + b.prep_failures) / double(b.runs);
            r.slope_eligible = b.error_events >= 10;
            table.push_back(std::move(r));
        }
    }
    return table;
}

namespace {
constexpr const char* kCsvHeader =
    "sweep_var,value,mode,runs,mean_fidelity,stderr_fidelity,mean_latency_s,failure_rate,"
    "slope_eligible";
}

void emit_csv(const ResultTable& table, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const PointResult& r : table) {
        out << csv_join({r.sweep_var, csv_num(r.value), to_string(r.mode),
                         std::to_string(r.runs), csv_num(r.mean_fidelity),
                         csv_num(r.stderr_fidelity), csv_num(r.mean_latency_s),
                         csv_num(r.failure_rate), r.slope_eligible ? "1" : "0"})
            << '\n';
    }
}

ResultTable parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("csv: missing or mismatched header");
    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = csv_split(line);
        if (cells.size() != 9) throw std::invalid_argument("csv: bad row: " + line);
        PointResult r;
        r.sweep_var = cells[0];
        r.value = std::stod(cells[1]);
        r.mode = cec_mode_from_name(cells[2]);
        r.runs = std::stoull(cells[3]);
        r.mean_fidelity = std::stod(cells[4]);
        r.stderr_fidelity = std::stod(cells[5]);
        r.mean_latency_s = std::stod(cells[6]);
        r.failure_rate = std::stod(cells[7]);
        if (cells[8] != "0" && cells[8] != "1")
            throw std::invalid_argument("csv: bad slope_eligible flag");
        r.slope_eligible = cells[8] == "1";
        table.push_back(std::move(r));
    }
    return table;
}

SweepSpec load_sweep_spec_text(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("sweep spec: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("sweep spec: top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        if (k != "kind" && k != "variable" && k != "grid" && k != "runs" && k != "seed" &&
            k != "modes" && k != "base")
            throw std::invalid_argument("sweep spec: unknown key '" + k + "'");
    }
    if (!doc.contains("kind") || !doc.contains("grid") || !doc.contains("base"))
        throw std::invalid_argument("sweep spec: 'kind', 'grid' and 'base' are required");

    SweepSpec spec;
    spec.kind = sweep_kind_from_name(doc["kind"].get<std::string>());
    if (doc.contains("variable")) spec.variable = doc["variable"].get<std::string>();
    for (const auto& v : doc["grid"]) spec.grid.push_back(v.get<double>());
    if (doc.contains("runs")) spec.runs_per_point = doc["runs"].get<std::uint64_t>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("modes")) {
        spec.modes.clear();
        for (const auto& m : doc["modes"]) spec.modes.push_back(cec_mode_from_name(m.get<std::string>()));
    }
    spec.base = load_config_text(doc["base"].dump());
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("sweep spec: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_sweep_spec_text(ss.str());
}

}  // namespace qrsim
