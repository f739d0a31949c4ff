#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrsim/config.hpp"
#include "qrsim/episode.hpp"
#include "qrsim/stats.hpp"

namespace qrsim {

/// Aggregate over one batch of independent episodes. Fidelity and latency
/// summaries cover successful runs only; counters and syndrome tallies sum
/// over everything.
struct BatchStats {
    std::uint64_t runs = 0;
    std::uint64_t successes = 0;
    std::uint64_t timeouts = 0;
    std::uint64_t prep_failures = 0;
    /// Successful runs whose trajectory fidelity fell below 1.
    std::uint64_t error_events = 0;
    std::uint64_t nonzero_syndromes = 0;
    Summary fidelity;
    Summary latency_s;
    OpCounters counters;
};

/// Plain loop, one episode after another. The reference implementation the
/// parallel farm is checked against.
BatchStats run_batch_serial(const SimConfig& cfg, std::uint64_t runs, std::uint64_t base_seed);

/// OpenMP farm over episode indices. Every episode derives its own seed from
/// (base_seed, index) and results are reduced in index order, so the output
/// is identical to the serial reference for any thread count.
BatchStats run_batch_parallel(const SimConfig& cfg, std::uint64_t runs, std::uint64_t base_seed,
                              int jobs = 0);

/// NumLinks subdivides the base topology's total length into more links;
/// Distance keeps the base link spacing and stretches the chain.
enum class SweepKind { SingleParam, Z, NumLinks, Distance };

SweepKind sweep_kind_from_name(const std::string& name);
std::string to_string(SweepKind k);

struct SweepSpec {
    SweepKind kind = SweepKind::SingleParam;
    /// For SingleParam: which hardware fidelity is swept (config-file
    /// spelling: F_1q, F_2q, F_m, F_init, F_phys). Ignored otherwise.
    std::string variable = "F_2q";
    std::vector<double> grid;
    SimConfig base;
    std::uint64_t runs_per_point = 1000;
    std::uint64_t seed = 1;
    std::vector<CecMode> modes = {CecMode::Cec};

    /// Grid nonempty and ascending, runs >= 1, variable recognized, and
    /// every grid value realizable (e.g. whole link counts). Throws otherwise.
    void validate() const;
};

/// The per-point configuration a sweep actually runs, exposed for tests and
/// for the CLI's dry-run output.
SimConfig sweep_point_config(const SweepSpec& spec, double value, CecMode mode);

struct PointResult {
    std::string sweep_var;
    double value = 0;
    CecMode mode = CecMode::Cec;
    std::uint64_t runs = 0;
    double mean_fidelity = 0;
    double stderr_fidelity = 0;
    double mean_latency_s = 0;
    double failure_rate = 0;
    bool slope_eligible = false;  // at least 10 error events observed

    bool operator==(const PointResult&) const = default;
};

using ResultTable = std::vector<PointResult>;

/// Runs every (grid value, mode) cell. Row order: grid-major, then modes in
/// spec order. The batch seed for a cell depends only on the grid index, so
/// the two decode modes see identical physics.
ResultTable run_sweep(const SweepSpec& spec, int jobs = 0);

void emit_csv(const ResultTable& table, std::ostream& out);
ResultTable parse_csv(std::istream& in);

/// Parses the JSON sweep description used by the CLI `sweep` subcommand.
SweepSpec load_sweep_spec_text(const std::string& json_text);
SweepSpec load_sweep_spec_file(const std::string& path);

}  // namespace qrsim
