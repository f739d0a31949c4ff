#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>

#include "qrsim/quantum_manager.hpp"
#include "qrsim/rng.hpp"
#include "qrsim/timeline.hpp"

namespace qrsim {

/// Hardware parameters for one node/link class. Defaults are the baseline
/// operating point used throughout the experiments.
struct HardwareProfile {
    double f_1q = 0.999;
    double f_2q = 0.9991;
    double f_meas = 0.996;
    double f_init = 0.99;
    double f_phys = 0.965;
    double t1 = 100.0;  // seconds
    double t2 = 2.0;    // seconds

    double eta_m = 0.90;   // memory/source efficiency
    double eta_d = 0.95;   // detector efficiency
    double alpha = 0.2;    // fiber loss, dB/km
    double c_star = 2e8;   // signal speed in fiber, m/s
    double d_fwd = 20e-6;  // per-hop classical forward delay, s
    double d_end = 50e-6;  // endpoint classical processing delay, s
    double t_prep = 2e-3;  // per-attempt pair preparation time, s

    // Optional biased gate channels; when off, gate noise is uniform
    // depolarizing. Weights are relative and get normalized; for two-qubit
    // gates `correlated_factor` scales every doubly-non-identity Pauli.
    bool biased_gates = false;
    double bias_1q[3] = {1.0, 1.0, 1.0};  // wx, wy, wz
    double bias_2q[3] = {1.0, 1.0, 1.0};
    double correlated_factor = 1.0;

    /// Throws std::invalid_argument on out-of-range parameters, including
    /// 2*T1 < T2 (which would make the idle channel unphysical).
    void validate() const;
};

/// p = 1.5 (1 - F); uniform single-qubit depolarizing strength.
double depolarize_prob_1q(double f_1q);
/// p = 1.25 (1 - F); uniform two-qubit depolarizing strength.
double depolarize_prob_2q(double f_2q);

struct IdleProbs {
    double px = 0, py = 0, pz = 0;
};
/// Biased Pauli channel for a qubit idling t seconds under T1/T2 decay.
IdleProbs idle_channel_probs(double t_seconds, double t1, double t2);

/// Which wrong Bell state a raw pair collapses into.
enum class BellFlip { X, Z, Y };
/// Applies the flip to `member`, mapping |Phi+> to |Psi+>, |Phi->, |Psi->.
void apply_bell_flip(QuantumManager& qm, Key member, BellFlip flip);

struct OpCounters {
    std::uint64_t one_q = 0;
    std::uint64_t two_q = 0;
    std::uint64_t meas = 0;
    std::uint64_t qubits = 0;
    std::uint64_t prep_attempts = 0;
    std::uint64_t herald_attempts = 0;

    OpCounters& operator+=(const OpCounters& o) {
        one_q += o.one_q;
        two_q += o.two_q;
        meas += o.meas;
        qubits += o.qubits;
        prep_attempts += o.prep_attempts;
        herald_attempts += o.herald_attempts;
        return *this;
    }
    std::uint64_t total_ops() const { return one_q + two_q + meas; }
};

/// All physical operations in an episode flow through here: each one first
/// pays the idle decoherence accrued since the qubit was last touched, then
/// the ideal operation, then its own noise channel. Pauli-frame corrections
/// bypass the engine on purpose (they are classical bookkeeping).
class NoiseEngine {
  public:
    NoiseEngine(QuantumManager& qm, HardwareProfile profile, std::uint64_t seed);

    const HardwareProfile& profile() const { return profile_; }

    /// Fresh qubit prepared in |0> at `now` (X flip with prob 1 - F_init).
    Key init_qubit(TimePs now);
    /// Fresh raw Bell pair at `now`, corrupted with prob 1 - F_phys.
    std::pair<Key, Key> bell_pair(TimePs now);

    void gate_h(Key q, TimePs now);
    void gate_cnot(Key c, Key t, TimePs now);
    /// Measures and reports the (possibly misread) classical bit; the
    /// post-measurement state follows the true outcome.
    int measure(Key q, Basis basis, TimePs now);

    /// Applies pending idle decoherence only. Used where a protocol phase
    /// ends with waiting rather than a gate.
    void touch(Key q, TimePs now);
    /// Noiseless Pauli-frame correction: no idle, no counters.
    void frame_pauli(Key q, char letter);
    /// Stops tracking a (measured-out) qubit.
    void release(Key q);

    OpCounters& counters() { return counters_; }
    RngStream& rng() { return rng_; }
    QuantumManager& manager() { return qm_; }

  private:
    void apply_idle(Key q, TimePs now);
    void depolarize_1q(Key q);
    void depolarize_2q(Key a, Key b);

    QuantumManager& qm_;
    HardwareProfile profile_;
    RngStream rng_;
    OpCounters counters_;
    std::unordered_map<Key, TimePs> last_touch_;
    double p1q_ = 0, p2q_ = 0;
    double cdf_1q_[3] = {0, 0, 0};
    double cdf_2q_[15];
};

}  // namespace qrsim
