#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qrsim/config.hpp"
#include "qrsim/noise.hpp"
#include "qrsim/quantum_manager.hpp"
#include "qrsim/steane.hpp"
#include "qrsim/timeline.hpp"

namespace qrsim {

/// Protocol boundaries where fault-injection hooks fire, in episode order.
enum class FaultStage {
    PairsReady,         // a link's 7 raw pairs are all up; keys = 14 comm qubits
    Encoded,            // both blocks prepared (control already rotated);
                        // keys = 14 data + 14 comm
    TcnotCorrected,     // teleported CNOT byproducts applied; keys = 14 data
    BeforeSwapMeasure,  // swap's transversal CNOT done; keys = 14 data
};

struct FaultPoint {
    FaultStage stage;
    /// Link index for link-scoped stages, middle-node index for swap stages.
    std::size_t index = 0;
    const std::vector<Key>* keys = nullptr;
};

/// Called at every stage boundary of an episode; may inject Paulis through
/// the manager. Purely a test/diagnostics facility.
using FaultHook = std::function<void(const FaultPoint&, QuantumManager&)>;

enum class EpisodeFailure { None, Timeout, PrepFailure };

struct ProtocolMessage {
    enum class Kind { TcnotAliceResult, TcnotBobResult, TcnotDone, QreFrame };
    Kind kind;
    std::size_t sender = 0;
    std::size_t receiver = 0;
    TimePs send_time = 0;
    TimePs arrival_time = 0;
};

struct RunRecord {
    bool success = false;
    EpisodeFailure failure = EpisodeFailure::None;
    double fidelity = 0.0;
    double latency_s = 0.0;
    OpCounters counters;
    /// Swap readout strings whose Hamming syndrome was nonzero (0..2 per
    /// swap).
    std::uint64_t nonzero_syndromes = 0;
    /// Pauli-frame contributions in arrival order, one per middle node.
    std::vector<std::pair<int, int>> frame_bits;
    /// Classical messages in delivery order (diagnostics).
    std::vector<ProtocolMessage> message_log;
    std::uint64_t messages = 0;
};

/// Per-episode seed derivation: decorrelates consecutive indices.
std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode_index);

/// Runs one full episode on a fresh Timeline and returns its record.
RunRecord run_episode(const SimConfig& cfg, std::uint64_t seed, const FaultHook* hook = nullptr);

/// Ideal recovery on both endpoint blocks, then the logical Bell-state
/// overlap from the three two-block logical correlators. Per trajectory the
/// value lands on {0, 1/4, 1/2, 3/4, 1}.
double extract_fidelity(const CssCode& code, QuantumManager& qm, const std::vector<Key>& left,
                        const std::vector<Key>& right, RngStream& rng);

}  // namespace qrsim
