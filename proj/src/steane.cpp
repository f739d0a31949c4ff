#include "qrsim/steane.hpp"

#include <bit>
#include <stdexcept>

namespace qrsim {

FtMode ft_mode_from_name(const std::string& name) {
    if (name == "none") return FtMode::None;
    if (name == "minimal") return FtMode::Minimal;
    if (name == "standard") return FtMode::Standard;
    throw std::invalid_argument("unknown ft_mode: " + name);
}

CecMode cec_mode_from_name(const std::string& name) {
    if (name == "cec") return CecMode::Cec;
    if (name == "none") return CecMode::None;
    throw std::invalid_argument("unknown cec_mode: " + name);
}

std::string to_string(FtMode m) {
    switch (m) {
        case FtMode::None: return "none";
        case FtMode::Minimal: return "minimal";
        case FtMode::Standard: return "standard";
    }
    return "?";
}

std::string to_string(CecMode m) {
    return m == CecMode::Cec ? "cec" : "none";
}

CssCode CssCode::make_steane() {
    CssCode c;
    c.name_ = "steane713";
    c.n_ = 7;
    c.k_ = 1;
    c.d_ = 3;
    // Position masks (bit i = position i+1) for syndrome bits 4, 2, 1.
    c.h_rows_ = {0b1111000, 0b1100110, 0b1010101};
    for (std::uint8_t row : c.h_rows_) {
        PauliString xs(7), zs(7);
        for (std::size_t i = 0; i < 7; ++i) {
            if (row >> i & 1) {
                xs.set(i, 'X');
                zs.set(i, 'Z');
            }
        }
        c.x_stabs_.push_back(std::move(xs));
        c.z_stabs_.push_back(std::move(zs));
    }
    c.logical_x_ = PauliString::from_text("XXXXXXX");
    c.logical_z_ = PauliString::from_text("ZZZZZZZ");
    c.verify_mask_ = 0b1100001;  // Z on positions 1, 6, 7

    using Op = EncoderOp;
    c.encoder_ = {
        {Op::H, 1, 0},    {Op::H, 2, 0},    {Op::H, 3, 0},
        {Op::CNOT, 1, 0}, {Op::CNOT, 3, 5}, {Op::CNOT, 2, 6}, {Op::CNOT, 1, 4},
        {Op::CNOT, 2, 0}, {Op::CNOT, 3, 6}, {Op::CNOT, 1, 5}, {Op::CNOT, 6, 4},
    };
    return c;
}

const CssCode& CssCode::by_name(const std::string& name) {
    static const CssCode steane = make_steane();
    if (name == steane.name_) return steane;
    throw std::invalid_argument("unknown code: " + name);
}

std::uint8_t CssCode::hamming_syndrome(std::uint8_t m) const {
    if (m >> n_) throw std::invalid_argument("hamming_syndrome: more than 7 bits set");
    std::uint8_t s = 0;
    for (std::size_t r = 0; r < 3; ++r)
        s = static_cast<std::uint8_t>((s << 1) | (std::popcount(unsigned(m & h_rows_[r])) & 1));
    return s;
}

MeasuredBlock CssCode::correct_and_extract(std::uint8_t m, CecMode mode) const {
    MeasuredBlock b;
    b.m = m;
    b.syndrome = hamming_syndrome(m);
    b.m_prime = m;
    if (mode == CecMode::Cec && b.syndrome != 0)
        b.m_prime = static_cast<std::uint8_t>(m ^ (1u << (b.syndrome - 1)));
    b.logical_bit = std::popcount(unsigned(b.m_prime)) & 1;
    return b;
}

namespace {

void run_encoder(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& data,
                 TimePs now) {
    for (const auto& op : code.encoder_ops()) {
        if (op.kind == CssCode::EncoderOp::H)
            eng.gate_h(data[op.a], now);
        else
            eng.gate_cnot(data[op.a], data[op.b], now);
    }
}

/// One ZIIIIZZ parity check; consumes a fresh ancilla.
int verification_round(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& data,
                       TimePs now) {
    Key anc = eng.init_qubit(now);
    std::uint8_t mask = code.verification_support();
    for (std::size_t i = 0; i < code.n(); ++i)
        if (mask >> i & 1) eng.gate_cnot(data[i], anc, now);
    int out = eng.measure(anc, Basis::Z, now);
    eng.release(anc);
    return out;
}

void discard_block(NoiseEngine& eng, std::vector<Key>& data) {
    // Traced out, not protocol measurements: bypass the op counters.
    QuantumManager& qm = eng.manager();
    for (Key k : data) {
        (void)qm.measure(k, Basis::Z, eng.rng());
        eng.release(k);
    }
    data.clear();
}

}  // namespace

EncodeResult encode_zero(const CssCode& code, NoiseEngine& eng, TimePs now, FtMode mode,
                         int retry_cap) {
    EncodeResult res;
    while (res.attempts < retry_cap) {
        ++res.attempts;
        ++eng.counters().prep_attempts;
        res.data.clear();
        for (std::size_t i = 0; i < code.n(); ++i) res.data.push_back(eng.init_qubit(now));
        run_encoder(code, eng, res.data, now);

        int rounds = mode == FtMode::None ? 0 : (mode == FtMode::Minimal ? 1 : 4);
        bool rejected = false;
        for (int r = 0; r < rounds && !rejected; ++r)
            rejected = verification_round(code, eng, res.data, now) != 0;
        if (!rejected) return res;
        discard_block(eng, res.data);
    }
    res.ok = false;
    return res;
}

void transversal_cnot(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& control,
                      const std::vector<Key>& target, TimePs now) {
    if (control.size() != code.n() || target.size() != code.n())
        throw std::invalid_argument("transversal_cnot: wrong block size");
    for (std::size_t i = 0; i < code.n(); ++i)
        for (std::size_t j = 0; j < code.n(); ++j)
            if (control[i] == target[j])
                throw std::invalid_argument("transversal_cnot: blocks share a qubit");
    for (std::size_t i = 0; i < code.n(); ++i) eng.gate_cnot(control[i], target[i], now);
}

void transversal_h(const CssCode& code, NoiseEngine& eng, const std::vector<Key>& block,
                   TimePs now) {
    if (block.size() != code.n()) throw std::invalid_argument("transversal_h: wrong block size");
    for (Key k : block) eng.gate_h(k, now);
}

void ideal_recovery(const CssCode& code, QuantumManager& qm, const std::vector<Key>& block,
                    RngStream& rng) {
    if (block.size() != code.n()) throw std::invalid_argument("ideal_recovery: wrong block size");
    auto measure_sector = [&](const std::vector<PauliString>& gens, char letter) {
        std::uint8_t synd = 0;
        for (const auto& g : gens) {
            std::vector<KeyPauli> obs;
            for (std::size_t i = 0; i < code.n(); ++i)
                if (g.at(i) != 'I') obs.push_back({block[i], letter});
            synd = static_cast<std::uint8_t>((synd << 1) |
                                             (qm.measure_observable(obs, false, rng) & 1));
        }
        return synd;
    };
    std::uint8_t sz = measure_sector(code.z_stabilizers(), 'Z');
    std::uint8_t sx = measure_sector(code.x_stabilizers(), 'X');
    if (sz != 0) qm.apply_pauli(block[sz - 1], 'X');
    if (sx != 0) qm.apply_pauli(block[sx - 1], 'Z');
}

}  // namespace qrsim
