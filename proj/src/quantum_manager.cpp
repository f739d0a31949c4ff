#include "qrsim/quantum_manager.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrsim {

const QuantumManager::Loc& QuantumManager::locate(Key q) const {
    auto it = where_.find(q);
    if (it == where_.end()) throw std::invalid_argument("QuantumManager: unknown key");
    return it->second;
}

void QuantumManager::reindex(std::size_t sid) {
    const auto& ks = states_.at(sid).keys();
    for (std::size_t i = 0; i < ks.size(); ++i) where_[ks[i]] = {sid, i};
}

Key QuantumManager::create_qubit() {
    Key k = next_key_++;
    states_.emplace(next_state_, TableauState::zero_state({k}));
    where_[k] = {next_state_, 0};
    ++next_state_;
    return k;
}

std::vector<Key> QuantumManager::create_qubits(std::size_t n) {
    std::vector<Key> ks(n);
    for (auto& k : ks) k = create_qubit();
    return ks;
}

std::pair<Key, Key> QuantumManager::create_bell_pair() {
    Key a = create_qubit();
    Key b = create_qubit();
    h(a);
    cnot(a, b);
    return {a, b};
}

std::size_t QuantumManager::fuse(const std::vector<Key>& ks) {
    std::vector<std::size_t> ids;
    for (Key k : ks) {
        std::size_t sid = locate(k).state_id;
        if (std::find(ids.begin(), ids.end(), sid) == ids.end()) ids.push_back(sid);
    }
    if (ids.size() == 1) return ids[0];
    std::vector<const TableauState*> parts;
    parts.reserve(ids.size());
    for (std::size_t sid : ids) parts.push_back(&states_.at(sid));
    TableauState merged = TableauState::merge(parts);
    for (std::size_t sid : ids) states_.erase(sid);
    std::size_t nid = next_state_++;
    states_.emplace(nid, std::move(merged));
    reindex(nid);
    return nid;
}

void QuantumManager::h(Key q) {
    const Loc& l = locate(q);
    states_.at(l.state_id).h(l.col);
}
void QuantumManager::s(Key q) {
    const Loc& l = locate(q);
    states_.at(l.state_id).s(l.col);
}
void QuantumManager::x(Key q) {
    const Loc& l = locate(q);
    states_.at(l.state_id).x(l.col);
}
void QuantumManager::y(Key q) {
    const Loc& l = locate(q);
    states_.at(l.state_id).y(l.col);
}
void QuantumManager::z(Key q) {
    const Loc& l = locate(q);
    states_.at(l.state_id).z(l.col);
}

void QuantumManager::apply_pauli(Key q, char letter) {
    switch (letter) {
        case 'I': return;
        case 'X': x(q); return;
        case 'Y': y(q); return;
        case 'Z': z(q); return;
        default: throw std::invalid_argument("apply_pauli: bad letter");
    }
}

void QuantumManager::cnot(Key control, Key target) {
    if (control == target) throw std::invalid_argument("cnot: control == target");
    std::size_t sid = fuse({control, target});
    const Loc& lc = locate(control);
    const Loc& lt = locate(target);
    states_.at(sid).cnot(lc.col, lt.col);
}

int QuantumManager::measure(Key q, Basis basis, RngStream& rng) {
    const Loc l = locate(q);
    TableauState& st = states_.at(l.state_id);
    int out = st.measure(l.col, basis, rng);
    if (st.num_qubits() > 1) {
        TableauState solo = st.take_out(l.col);
        std::size_t nid = next_state_++;
        states_.emplace(nid, std::move(solo));
        reindex(l.state_id);
        where_[q] = {nid, 0};
    }
    return out;
}

int QuantumManager::measure_observable(const std::vector<KeyPauli>& ops, bool negative,
                                       RngStream& rng) {
    if (ops.empty()) throw std::invalid_argument("measure_observable: empty observable");
    std::vector<Key> ks;
    ks.reserve(ops.size());
    for (const auto& op : ops) ks.push_back(op.key);
    std::size_t sid = fuse(ks);
    TableauState& st = states_.at(sid);
    PauliString ps(st.num_qubits());
    for (const auto& op : ops) {
        std::size_t col = locate(op.key).col;
        if (ps.at(col) != 'I') throw std::invalid_argument("measure_observable: duplicate key");
        ps.set(col, op.letter);
    }
    ps.set_negative(negative);
    return st.measure_pauli(ps, rng);
}

int QuantumManager::peek(const std::vector<KeyPauli>& ops, bool negative) const {
    std::unordered_map<std::size_t, PauliString> by_state;
    for (const auto& op : ops) {
        const Loc& l = locate(op.key);
        auto [it, fresh] = by_state.try_emplace(l.state_id, PauliString{});
        if (fresh) it->second = PauliString(states_.at(l.state_id).num_qubits());
        if (it->second.at(l.col) != 'I') throw std::invalid_argument("peek: duplicate key");
        it->second.set(l.col, op.letter);
    }
    int v = 1;
    for (const auto& [sid, ps] : by_state) {
        int f = states_.at(sid).peek(ps);
        if (f == 0) return 0;
        v *= f;
    }
    return negative ? -v : v;
}

void QuantumManager::release(Key q) {
    const Loc l = locate(q);
    if (states_.at(l.state_id).num_qubits() != 1)
        throw std::logic_error("release: qubit still entangled");
    states_.erase(l.state_id);
    where_.erase(q);
}

std::size_t QuantumManager::group_size(Key q) const {
    return states_.at(locate(q).state_id).num_qubits();
}

bool QuantumManager::check_valid() const {
    for (const auto& [sid, st] : states_) {
        if (!st.check_valid()) return false;
        const auto& ks = st.keys();
        for (std::size_t i = 0; i < ks.size(); ++i) {
            auto it = where_.find(ks[i]);
            if (it == where_.end()) return false;
            if (it->second.state_id != sid || it->second.col != i) return false;
        }
    }
    std::size_t total = 0;
    for (const auto& [sid, st] : states_) total += st.num_qubits();
    return total == where_.size();
}

}  // namespace qrsim
