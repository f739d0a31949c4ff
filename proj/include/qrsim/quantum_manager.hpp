#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrsim/pauli.hpp"
#include "qrsim/rng.hpp"
#include "qrsim/tableau.hpp"

namespace qrsim {

/// Global handle for one qubit, stable across state merges and splits.
using Key = std::uint64_t;

/// One (qubit, letter) factor of a multi-qubit Pauli observable.
struct KeyPauli {
    Key key;
    char letter;  // 'X', 'Y' or 'Z'
};

/// Owns a forest of stabilizer states and the key -> (state, column) index.
/// Two-qubit gates across states merge them on demand; measuring a qubit
/// splits it back out into its own single-qubit state, so entangled groups
/// stay as small as the circuit allows.
class QuantumManager {
  public:
    QuantumManager() = default;

    /// Fresh qubit in |0>.
    Key create_qubit();
    std::vector<Key> create_qubits(std::size_t n);
    /// Two fresh qubits in |Phi+> = (|00> + |11>)/sqrt(2).
    std::pair<Key, Key> create_bell_pair();

    void h(Key q);
    void s(Key q);
    void x(Key q);
    void y(Key q);
    void z(Key q);
    void cnot(Key control, Key target);
    void apply_pauli(Key q, char letter);

    int measure(Key q, Basis basis, RngStream& rng);

    /// Joint projective measurement of a Pauli observable spanning any set of
    /// live qubits (their states fuse first if needed).
    int measure_observable(const std::vector<KeyPauli>& ops, bool negative, RngStream& rng);

    /// Expectation of a signed Pauli observable: -1, 0 or +1. Works across
    /// state boundaries (tensor factors multiply) and never mutates.
    int peek(const std::vector<KeyPauli>& ops, bool negative = false) const;

    /// Forgets a qubit. It must be unentangled (measure it first).
    void release(Key q);

    bool exists(Key q) const { return where_.contains(q); }
    std::size_t num_tracked() const { return where_.size(); }
    /// Size of the entangled group currently holding q.
    std::size_t group_size(Key q) const;
    bool check_valid() const;

  private:
    struct Loc {
        std::size_t state_id;
        std::size_t col;
    };

    const Loc& locate(Key q) const;
    void reindex(std::size_t sid);
    /// Fuses the states holding the given keys into one; returns its id.
    std::size_t fuse(const std::vector<Key>& ks);

    std::unordered_map<Key, Loc> where_;
    std::unordered_map<std::size_t, TableauState> states_;
    Key next_key_ = 1;
    std::size_t next_state_ = 0;
};

}  // namespace qrsim
