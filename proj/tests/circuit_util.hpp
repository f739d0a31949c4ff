#pragma once

// Random Clifford circuit generation and dual-backend trajectory replay,
// shared by the stabilizer unit tests and the acceptance gate.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qrsim/rng.hpp"
#include "qrsim/statevector.hpp"
#include "qrsim/tableau.hpp"

namespace qrsim::testutil {

struct CircuitOp {
    enum Kind { H, S, X, Y, Z, CNOT, MEASURE } kind;
    std::size_t q = 0;
    std::size_t q2 = 0;
    Basis basis = Basis::Z;
};

struct Circuit {
    std::size_t n = 0;
    std::vector<CircuitOp> ops;

    std::size_t num_measurements() const {
        std::size_t m = 0;
        for (const auto& op : ops)
            if (op.kind == CircuitOp::MEASURE) ++m;
        return m;
    }
};

inline Circuit random_circuit(std::size_t n, std::size_t len, RngStream& rng) {
    Circuit c;
    c.n = n;
    c.ops.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        CircuitOp op;
        std::size_t kind = rng.below(7);
        op.q = rng.below(n);
        switch (kind) {
            case 0: op.kind = CircuitOp::H; break;
            case 1: op.kind = CircuitOp::S; break;
            case 2: op.kind = CircuitOp::X; break;
            case 3: op.kind = CircuitOp::Y; break;
            case 4: op.kind = CircuitOp::Z; break;
            case 5:
                op.kind = CircuitOp::CNOT;
                op.q2 = (op.q + 1 + rng.below(n - 1)) % n;
                break;
            default:
                op.kind = CircuitOp::MEASURE;
                op.basis = rng.bernoulli(0.5) ? Basis::Z : Basis::X;
                break;
        }
        c.ops.push_back(op);
    }
    return c;
}

/// Runs the circuit on the tableau backend only. Returns the measurement
/// outcome bits in program order and counts how many were genuinely random.
struct ShotResult {
    std::vector<int> outcomes;
    std::size_t num_random = 0;
};

inline ShotResult tableau_shot(const Circuit& c, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<std::uint64_t> keys(c.n);
    for (std::size_t i = 0; i < c.n; ++i) keys[i] = i + 1;
    TableauState t = TableauState::zero_state(keys);
    ShotResult r;
    for (const auto& op : c.ops) {
        switch (op.kind) {
            case CircuitOp::H: t.h(op.q); break;
            case CircuitOp::S: t.s(op.q); break;
            case CircuitOp::X: t.x(op.q); break;
            case CircuitOp::Y: t.y(op.q); break;
            case CircuitOp::Z: t.z(op.q); break;
            case CircuitOp::CNOT: t.cnot(op.q, op.q2); break;
            case CircuitOp::MEASURE:
                if (!t.is_deterministic(op.q, op.basis)) ++r.num_random;
                r.outcomes.push_back(t.measure(op.q, op.basis, rng));
                break;
        }
    }
    return r;
}

/// Runs one trajectory on the tableau backend while replaying it on the
/// state-vector oracle with forced outcomes. Checks, per measurement, that
/// the oracle assigns probability 1 to outcomes the tableau called
/// deterministic and 1/2 to the random ones. Optionally sweeps every signed
/// n-qubit Pauli at the end and compares peek() against the exact
/// expectation.
struct ReplayReport {
    bool ok = true;
    std::string detail;
};

inline ReplayReport lockstep_replay(const Circuit& c, std::uint64_t measure_seed,
                                    bool exhaustive_paulis) {
    ReplayReport rep;
    RngStream rng(measure_seed);
    std::vector<std::uint64_t> keys(c.n);
    for (std::size_t i = 0; i < c.n; ++i) keys[i] = i + 1;
    TableauState t = TableauState::zero_state(keys);
    StateVector sv(c.n);
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.detail = std::move(msg);
    };
    std::size_t opi = 0;
    for (const auto& op : c.ops) {
        switch (op.kind) {
            case CircuitOp::H: t.h(op.q); sv.h(op.q); break;
            case CircuitOp::S: t.s(op.q); sv.s(op.q); break;
            case CircuitOp::X: t.x(op.q); sv.x(op.q); break;
            case CircuitOp::Y: t.y(op.q); sv.y(op.q); break;
            case CircuitOp::Z: t.z(op.q); sv.z(op.q); break;
            case CircuitOp::CNOT: t.cnot(op.q, op.q2); sv.cnot(op.q, op.q2); break;
            case CircuitOp::MEASURE: {
                bool det = t.is_deterministic(op.q, op.basis);
                int out = t.measure(op.q, op.basis, rng);
                double p = sv.outcome_prob(op.q, op.basis, out);
                double want = det ? 1.0 : 0.5;
                if (std::abs(p - want) > 1e-9) {
                    fail("op " + std::to_string(opi) + ": outcome prob " + std::to_string(p) +
                         ", expected " + std::to_string(want));
                    return rep;
                }
                sv.measure_forced(op.q, op.basis, out);
                break;
            }
        }
        ++opi;
    }
    if (!t.check_valid()) {
        fail("tableau invariants violated at end of circuit");
        return rep;
    }
    if (exhaustive_paulis) {
        std::size_t total = std::size_t{1} << (2 * c.n);
        for (std::size_t code = 0; code < total; ++code) {
            PauliString p(c.n);
            std::size_t v = code;
            for (std::size_t q = 0; q < c.n; ++q) {
                static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
                p.set(q, kLetters[v % 4]);
                v /= 4;
            }
            int tv = t.peek(p);
            double sve = sv.pauli_expectation(p);
            if (std::abs(sve - tv) > 1e-9) {
                fail("pauli " + p.str() + ": tableau " + std::to_string(tv) + ", oracle " +
                     std::to_string(sve));
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace qrsim::testutil
