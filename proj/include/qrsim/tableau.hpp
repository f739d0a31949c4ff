#pragma once

#include <cstdint>
#include <vector>

#include "qrsim/pauli.hpp"
#include "qrsim/rng.hpp"

namespace qrsim {

enum class Basis { Z, X };

/// Aaronson-Gottesman style stabilizer tableau: n destabilizer rows followed
/// by n stabilizer rows, bit-packed over GF(2), one sign bit per row, Y = iXZ.
/// Destabilizers make single measurements O(n^2) instead of O(n^3).
///
/// Columns are bound to global memory keys; the owning QuantumManager keeps
/// the key -> (state, column) index. Measuring a qubit collapses it, rewrites
/// the tableau so that qubit is manifestly a product factor, and take_out()
/// then splits it into its own single-qubit state.
class TableauState {
  public:
    /// |0...0> on the given keys.
    static TableauState zero_state(std::vector<std::uint64_t> keys);

    /// Tensor product; key lists concatenate in argument order.
    static TableauState merge(const std::vector<const TableauState*>& parts);

    std::size_t num_qubits() const { return n_; }
    const std::vector<std::uint64_t>& keys() const { return keys_; }

    void h(std::size_t q);
    void s(std::size_t q);
    void x(std::size_t q);
    void y(std::size_t q);
    void z(std::size_t q);
    void cnot(std::size_t control, std::size_t target);

    /// Projective single-qubit measurement. Returns 0 or 1; draws from `rng`
    /// only when the outcome is genuinely random.
    int measure(std::size_t q, Basis basis, RngStream& rng);

    /// True if measuring q in `basis` would be deterministic.
    bool is_deterministic(std::size_t q, Basis basis) const;

    /// Projective measurement of an arbitrary Pauli observable over this
    /// state's columns. The sign of `obs` folds into the outcome, so
    /// measuring -Z on |0> yields 1. Unlike measure(), no column is isolated.
    int measure_pauli(const PauliString& obs, RngStream& rng);

    /// Splits column q (which must be a clean product factor, i.e. right after
    /// measure() of that qubit) into its own 1-qubit state. This state shrinks.
    TableauState take_out(std::size_t q);

    /// Expectation of a signed Pauli over this state's columns: -1, 0 or +1.
    /// Never mutates.
    int peek(const PauliString& obs) const;

    /// Structural invariants: stabilizer rows commute pairwise and have full
    /// rank; destabilizer i anticommutes with stabilizer i and only with it.
    bool check_valid() const;

  private:
    TableauState() = default;

    std::uint64_t xw(std::size_t row, std::size_t w) const { return xs_[row * words_ + w]; }
    std::uint64_t zw(std::size_t row, std::size_t w) const { return zs_[row * words_ + w]; }
    bool xbit(std::size_t row, std::size_t q) const;
    bool zbit(std::size_t row, std::size_t q) const;
    bool anticommutes(std::size_t row, std::size_t q, Basis basis) const;
    void row_mul(std::size_t dst, std::size_t src);
    void row_mul_into(std::vector<std::uint64_t>& accx, std::vector<std::uint64_t>& accz,
                      int& accsign, std::size_t src) const;
    void sweep_column(std::size_t p, std::size_t q, Basis basis);

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> xs_, zs_;  // 2n rows, row-major, words_ words each
    std::vector<std::uint8_t> signs_;     // 2n sign bits
};

}  // namespace qrsim
