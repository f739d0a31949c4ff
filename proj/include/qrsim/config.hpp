#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrsim/noise.hpp"
#include "qrsim/steane.hpp"

namespace qrsim {

/// Linear repeater chain. Node 0 is the initiator.
struct Topology {
    struct Link {
        std::size_t left = 0;
        std::size_t right = 0;
        double length_km = 0;
    };

    std::vector<std::string> nodes;
    std::vector<Link> links;

    std::size_t num_nodes() const { return nodes.size(); }
    std::size_t num_links() const { return links.size(); }
    double total_length_km() const;
    /// 30 per link: two 8-qubit block preparations plus 14 communication
    /// qubits.
    std::size_t total_qubits() const { return 30 * num_links(); }

    /// Throws std::invalid_argument unless the links form the chain
    /// 0-1-2-...-(N-1) in order, with positive lengths.
    void validate() const;

    /// Uniform chain of n nodes with the given spacing.
    static Topology chain(std::size_t n, double link_km);
};

struct ProtocolSettings {
    std::string code = "steane713";
    FtMode ft_mode = FtMode::Minimal;
    CecMode cec_mode = CecMode::Cec;
    double episode_timeout_s = 10.0;
    int prep_retry_cap = 100;
};

struct ExperimentSettings {
    std::uint64_t runs = 1000;
    std::uint64_t seed = 1;
    std::optional<double> z;
};

struct SimConfig {
    Topology topology;
    HardwareProfile hardware;
    ProtocolSettings protocol;
    ExperimentSettings experiment;

    void validate() const;
};

/// Parses and validates a configuration document. Unknown keys anywhere are
/// rejected so typos fail loudly. Missing optional fields take the defaults
/// above; `nodes` and `links` are required.
SimConfig load_config_text(const std::string& json_text);
SimConfig load_config_file(const std::string& path);

/// One-way classical message latency between two chain nodes:
/// distance/c* + hops * D_fwd + D_end.
double classical_latency(const Topology& topo, std::size_t u, std::size_t v,
                         const HardwareProfile& p);

/// Hardware quality interpolation toward the perfect point: every fidelity
/// moves as F + (1-F0)z and T2 stretches so the per-t_link dephasing
/// probability scales by (1-z), capped at 199.99 s.
HardwareProfile z_profile(double z, const HardwareProfile& baseline, double t_link_s = 0.0151);

/// Per-attempt success probability of midpoint two-photon heralding.
double herald_success_prob(const HardwareProfile& p, double length_km);
/// Attempt period: photon travel both ways plus per-attempt preparation.
double herald_attempt_period_s(const HardwareProfile& p, double length_km);

}  // namespace qrsim
