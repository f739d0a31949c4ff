#include "qrsim/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrsim {

void HardwareProfile::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(f_meas) || !in01(f_init) || !in01(f_phys) || !in01(eta_m) || !in01(eta_d))
        throw std::invalid_argument("HardwareProfile: fidelities/efficiencies must be in [0,1]");
    if (f_1q < 2.0 / 3.0 || f_1q > 1.0)
        throw std::invalid_argument("HardwareProfile: F_1q out of [2/3, 1]");
    if (f_2q < 0.2 || f_2q > 1.0)
        throw std::invalid_argument("HardwareProfile: F_2q out of [1/5, 1]");
    if (!(t1 > 0.0) || !(t2 > 0.0))
        throw std::invalid_argument("HardwareProfile: T1 and T2 must be positive");
    if (2.0 * t1 < t2)
        throw std::invalid_argument("HardwareProfile: 2*T1 >= T2 required");
    if (alpha < 0.0 || c_star <= 0.0)
        throw std::invalid_argument("HardwareProfile: bad channel parameters");
    if (d_fwd < 0.0 || d_end < 0.0 || t_prep < 0.0)
        throw std::invalid_argument("HardwareProfile: delays must be nonnegative");
    if (biased_gates) {
        double s1 = 0, s2 = 0;
        for (int i = 0; i < 3; ++i) {
            if (bias_1q[i] < 0.0 || bias_2q[i] < 0.0)
                throw std::invalid_argument("HardwareProfile: bias weights must be nonnegative");
            s1 += bias_1q[i];
            s2 += bias_2q[i];
        }
        if (s1 == 0.0 || s2 == 0.0 || correlated_factor < 0.0)
            throw std::invalid_argument("HardwareProfile: degenerate bias weights");
    }
}

double depolarize_prob_1q(double f_1q) {
    if (f_1q < 2.0 / 3.0 || f_1q > 1.0)
        throw std::invalid_argument("depolarize_prob_1q: F out of [2/3, 1]");
    return 1.5 * (1.0 - f_1q);
}

double depolarize_prob_2q(double f_2q) {
    if (f_2q < 0.2 || f_2q > 1.0)
        throw std::invalid_argument("depolarize_prob_2q: F out of [1/5, 1]");
    return 1.25 * (1.0 - f_2q);
}

IdleProbs idle_channel_probs(double t_seconds, double t1, double t2) {
    if (t_seconds < 0.0) throw std::invalid_argument("idle_channel_probs: negative time");
    if (!(t1 > 0.0) || !(t2 > 0.0) || 2.0 * t1 < t2)
        throw std::invalid_argument("idle_channel_probs: need T1, T2 > 0 and 2*T1 >= T2");
    IdleProbs p;
    double relax = 1.0 - std::exp(-t_seconds / t1);
    double dephase = 1.0 - std::exp(-t_seconds / t2);
    p.px = relax / 4.0;
    p.py = relax / 4.0;
    p.pz = dephase / 2.0 - relax / 4.0;
    if (p.pz < 0.0) p.pz = 0.0;  // only roundoff can get here given 2*T1 >= T2
    return p;
}

void apply_bell_flip(QuantumManager& qm, Key member, BellFlip flip) {
    switch (flip) {
        case BellFlip::X: qm.x(member); break;
        case BellFlip::Z: qm.z(member); break;
        case BellFlip::Y: qm.y(member); break;
    }
}

NoiseEngine::NoiseEngine(QuantumManager& qm, HardwareProfile profile, std::uint64_t seed)
    : qm_(qm), profile_(profile), rng_(seed) {
    profile_.validate();
    p1q_ = depolarize_prob_1q(profile_.f_1q);
    p2q_ = depolarize_prob_2q(profile_.f_2q);

    double w1[3] = {1.0, 1.0, 1.0};
    double w2[15];
    if (profile_.biased_gates)
        for (int i = 0; i < 3; ++i) w1[i] = profile_.bias_1q[i];
    // Two-qubit Pauli index: 4*a + b - 1 over letters (I,X,Y,Z), skipping II.
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            double w;
            if (!profile_.biased_gates) {
                w = 1.0;
            } else if (a == 0) {
                w = profile_.bias_2q[b - 1];
            } else if (b == 0) {
                w = profile_.bias_2q[a - 1];
            } else {
                w = profile_.bias_2q[a - 1] * profile_.bias_2q[b - 1] *
                    profile_.correlated_factor;
            }
            w2[4 * a + b - 1] = w;
        }

    double s1 = w1[0] + w1[1] + w1[2];
    double acc = 0;
    for (int i = 0; i < 3; ++i) {
        acc += w1[i] / s1;
        cdf_1q_[i] = acc;
    }
    double s2 = 0;
    for (double w : w2) s2 += w;
    acc = 0;
    for (int i = 0; i < 15; ++i) {
        acc += w2[i] / s2;
        cdf_2q_[i] = acc;
    }
}

void NoiseEngine::apply_idle(Key q, TimePs now) {
    auto it = last_touch_.find(q);
    if (it == last_touch_.end()) throw std::logic_error("NoiseEngine: untracked qubit");
    TimePs dt = now - it->second;
    if (dt < 0) throw std::logic_error("NoiseEngine: touch moved backwards in time");
    it->second = now;
    if (dt == 0) return;
    IdleProbs p = idle_channel_probs(to_seconds(dt), profile_.t1, profile_.t2);
    if (p.px + p.py + p.pz <= 0.0) return;
    double u = rng_.uniform();
    if (u < p.px)
        qm_.x(q);
    else if (u < p.px + p.py)
        qm_.y(q);
    else if (u < p.px + p.py + p.pz)
        qm_.z(q);
}

void NoiseEngine::depolarize_1q(Key q) {
    if (p1q_ <= 0.0) return;
    if (!rng_.bernoulli(p1q_)) return;
    double u = rng_.uniform();
    if (u < cdf_1q_[0])
        qm_.x(q);
    else if (u < cdf_1q_[1])
        qm_.y(q);
    else
        qm_.z(q);
}

void NoiseEngine::depolarize_2q(Key a, Key b) {
    if (p2q_ <= 0.0) return;
    if (!rng_.bernoulli(p2q_)) return;
    double u = rng_.uniform();
    int idx = 14;
    for (int i = 0; i < 15; ++i)
        if (u < cdf_2q_[i]) {
            idx = i;
            break;
        }
    static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
    qm_.apply_pauli(a, kLetters[(idx + 1) / 4]);
    qm_.apply_pauli(b, kLetters[(idx + 1) % 4]);
}

Key NoiseEngine::init_qubit(TimePs now) {
    Key k = qm_.create_qubit();
    last_touch_[k] = now;
    ++counters_.qubits;
    if (profile_.f_init < 1.0 && rng_.bernoulli(1.0 - profile_.f_init)) qm_.x(k);
    return k;
}

std::pair<Key, Key> NoiseEngine::bell_pair(TimePs now) {
    auto pr = qm_.create_bell_pair();
    last_touch_[pr.first] = now;
    last_touch_[pr.second] = now;
    counters_.qubits += 2;
    if (profile_.f_phys < 1.0 && rng_.bernoulli(1.0 - profile_.f_phys)) {
        static constexpr BellFlip kFlips[3] = {BellFlip::X, BellFlip::Z, BellFlip::Y};
        apply_bell_flip(qm_, pr.first, kFlips[rng_.below(3)]);
    }
    return pr;
}

void NoiseEngine::gate_h(Key q, TimePs now) {
    apply_idle(q, now);
    qm_.h(q);
    depolarize_1q(q);
    ++counters_.one_q;
}

void NoiseEngine::gate_cnot(Key c, Key t, TimePs now) {
    apply_idle(c, now);
    apply_idle(t, now);
    qm_.cnot(c, t);
    depolarize_2q(c, t);
    ++counters_.two_q;
}

int NoiseEngine::measure(Key q, Basis basis, TimePs now) {
    apply_idle(q, now);
    int out = qm_.measure(q, basis, rng_);
    ++counters_.meas;
    if (profile_.f_meas < 1.0 && rng_.bernoulli(1.0 - profile_.f_meas)) out ^= 1;
    return out;
}

void NoiseEngine::touch(Key q, TimePs now) { apply_idle(q, now); }

void NoiseEngine::frame_pauli(Key q, char letter) { qm_.apply_pauli(q, letter); }

void NoiseEngine::release(Key q) {
    last_touch_.erase(q);
    qm_.release(q);
}

}  // namespace qrsim
