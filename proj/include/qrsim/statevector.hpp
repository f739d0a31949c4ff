#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qrsim/pauli.hpp"
#include "qrsim/rng.hpp"
#include "qrsim/tableau.hpp"

namespace qrsim {

/// Dense 2^n state vector. Exponentially slow on purpose: it is the
/// independent reference the stabilizer backend is tested against, so it
/// shares no code with the tableau path. Qubit 0 is the least significant
/// bit of the basis index.
class StateVector {
  public:
    explicit StateVector(std::size_t n);

    std::size_t num_qubits() const { return n_; }

    void h(std::size_t q);
    void s(std::size_t q);
    void x(std::size_t q);
    void y(std::size_t q);
    void z(std::size_t q);
    void cnot(std::size_t control, std::size_t target);

    /// Samples a projective measurement from the Born rule.
    int measure(std::size_t q, Basis basis, RngStream& rng);

    /// Probability of the given outcome without collapsing.
    double outcome_prob(std::size_t q, Basis basis, int outcome) const;

    /// Collapses onto a prescribed outcome and returns its pre-collapse
    /// probability. Used to replay a trajectory recorded on another backend;
    /// throws if that outcome has (numerically) zero probability.
    double measure_forced(std::size_t q, Basis basis, int outcome);

    /// <psi|P|psi>; real up to rounding for any signed Pauli.
    double pauli_expectation(const PauliString& p) const;

    std::complex<double> amplitude(std::size_t basis_index) const { return a_[basis_index]; }

  private:
    void project(std::size_t q, int outcome, double prob);

    std::size_t n_;
    std::vector<std::complex<double>> a_;
};

}  // namespace qrsim
