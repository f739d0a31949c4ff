#include "qrsim/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qrsim {

namespace {
constexpr double kSqrtHalf = 0.70710678118654752440;
constexpr std::complex<double> kI{0.0, 1.0};
}  // namespace

StateVector::StateVector(std::size_t n) : n_(n) {
    if (n == 0 || n > 24) throw std::invalid_argument("StateVector: unsupported qubit count");
    a_.assign(std::size_t{1} << n, {0.0, 0.0});
    a_[0] = 1.0;
}

void StateVector::h(std::size_t q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < a_.size(); ++b) {
        if (b & bit) continue;
        auto lo = a_[b], hi = a_[b | bit];
        a_[b] = (lo + hi) * kSqrtHalf;
        a_[b | bit] = (lo - hi) * kSqrtHalf;
    }
}

void StateVector::s(std::size_t q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < a_.size(); ++b)
        if (b & bit) a_[b] *= kI;
}

void StateVector::x(std::size_t q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < a_.size(); ++b)
        if (!(b & bit)) std::swap(a_[b], a_[b | bit]);
}

void StateVector::y(std::size_t q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < a_.size(); ++b) {
        if (b & bit) continue;
        auto lo = a_[b], hi = a_[b | bit];
        a_[b] = -kI * hi;
        a_[b | bit] = kI * lo;
    }
}

void StateVector::z(std::size_t q) {
    std::size_t bit = std::size_t{1} << q;
    for (std::size_t b = 0; b < a_.size(); ++b)
        if (b & bit) a_[b] = -a_[b];
}

void StateVector::cnot(std::size_t control, std::size_t target) {
    std::size_t cb = std::size_t{1} << control;
    std::size_t tb = std::size_t{1} << target;
    for (std::size_t b = 0; b < a_.size(); ++b)
        if ((b & cb) && !(b & tb)) std::swap(a_[b], a_[b | tb]);
}

double StateVector::outcome_prob(std::size_t q, Basis basis, int outcome) const {
    if (basis == Basis::X) {
        auto tmp = *this;
        tmp.h(q);
        return tmp.outcome_prob(q, Basis::Z, outcome);
    }
    std::size_t bit = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t b = 0; b < a_.size(); ++b)
        if (((b & bit) != 0) == (outcome != 0)) p += std::norm(a_[b]);
    return p;
}

void StateVector::project(std::size_t q, int outcome, double prob) {
    std::size_t bit = std::size_t{1} << q;
    double scale = 1.0 / std::sqrt(prob);
    for (std::size_t b = 0; b < a_.size(); ++b) {
        if (((b & bit) != 0) == (outcome != 0))
            a_[b] *= scale;
        else
            a_[b] = 0.0;
    }
}

int StateVector::measure(std::size_t q, Basis basis, RngStream& rng) {
    if (basis == Basis::X) {
        h(q);
        int out = measure(q, Basis::Z, rng);
        h(q);
        return out;
    }
    double p1 = outcome_prob(q, Basis::Z, 1);
    int outcome = rng.uniform() < p1 ? 1 : 0;
    project(q, outcome, outcome ? p1 : 1.0 - p1);
    return outcome;
}

double StateVector::measure_forced(std::size_t q, Basis basis, int outcome) {
    if (basis == Basis::X) {
        h(q);
        double p = measure_forced(q, Basis::Z, outcome);
        h(q);
        return p;
    }
    double p = outcome_prob(q, Basis::Z, outcome);
    if (p < 1e-12) throw std::logic_error("measure_forced: outcome has zero probability");
    project(q, outcome, p);
    return p;
}

double StateVector::pauli_expectation(const PauliString& p) const {
    if (p.num_qubits() != n_) throw std::invalid_argument("pauli_expectation: size mismatch");
    std::size_t xmask = 0, zmask = 0;
    for (std::size_t q = 0; q < n_; ++q) {
        char w = p.at(q);
        if (w == 'X' || w == 'Y') xmask |= std::size_t{1} << q;
        if (w == 'Z' || w == 'Y') zmask |= std::size_t{1} << q;
    }
    // P|b> = i^{|x&z|} (-1)^{|b&z|} |b^x>, with Y == iXZ.
    std::complex<double> front = 1.0;
    switch (std::popcount(xmask & zmask) % 4) {
        case 0: front = 1.0; break;
        case 1: front = kI; break;
        case 2: front = -1.0; break;
        case 3: front = -kI; break;
    }
    if (p.negative()) front = -front;
    std::complex<double> acc = 0.0;
    for (std::size_t b = 0; b < a_.size(); ++b) {
        double sign = std::popcount(b & zmask) % 2 ? -1.0 : 1.0;
        acc += std::conj(a_[b ^ xmask]) * front * sign * a_[b];
    }
    return acc.real();
}

}  // namespace qrsim
