#include "qrsim/episode.hpp"

#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "qrsim/heralding.hpp"

namespace qrsim {

std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode_index) {
    std::uint64_t st = base_seed ^ (0x9E3779B97F4A7C15ULL * (episode_index + 1));
    splitmix64(st);
    return splitmix64(st);
}

double extract_fidelity(const CssCode& code, QuantumManager& qm, const std::vector<Key>& left,
                        const std::vector<Key>& right, RngStream& rng) {
    ideal_recovery(code, qm, left, rng);
    ideal_recovery(code, qm, right, rng);

    std::size_t n = code.n();
    auto correlator = [&](const PauliString& lop, const PauliString& rop) {
        std::vector<KeyPauli> ops;
        for (std::size_t i = 0; i < n; ++i)
            if (lop.at(i) != 'I') ops.push_back({left[i], lop.at(i)});
        for (std::size_t i = 0; i < n; ++i)
            if (rop.at(i) != 'I') ops.push_back({right[i], rop.at(i)});
        return qm.peek(ops);
    };

    // Logical Y on this code is -Y...Y, so the YY correlator has a plain
    // all-Y representative with the two minus signs cancelling.
    PauliString ally = PauliString::from_text(std::string(n, 'Y'));
    int xx = correlator(code.logical_x(), code.logical_x());
    int yy = correlator(ally, ally);
    int zz = correlator(code.logical_z(), code.logical_z());
    return (1.0 + xx - yy + zz) / 4.0;
}

namespace {

struct LinkRt {
    double lat_s = 0;
    std::vector<std::pair<Key, Key>> pairs;
    std::size_t pairs_up = 0;
    std::vector<Key> comm_left, comm_right;
    std::vector<Key> data_left, data_right;
    std::vector<int> m_alice, m_bob;
    int corrections_in = 0;
    int dones_in = 0;
    bool done = false;
};

class EpisodeRunner {
  public:
    EpisodeRunner(const SimConfig& cfg, std::uint64_t seed, const FaultHook* hook)
        : cfg_(cfg),
          hook_(hook),
          eng_(qm_, cfg.hardware, seed),
          fid_rng_(RngStream::derive(seed, {0xF1DE11})),
          code_(CssCode::by_name(cfg.protocol.code)) {}

    RunRecord run() {
        cfg_.validate();
        const Topology& topo = cfg_.topology;
        std::size_t nl = topo.num_links();
        links_.resize(nl);
        heralds_.reserve(nl);

        tl_.schedule(to_ps(cfg_.protocol.episode_timeout_s),
                     [this] { fail(EpisodeFailure::Timeout); });

        for (std::size_t i = 0; i < nl; ++i) {
            LinkRt& lk = links_[i];
            lk.lat_s = classical_latency(topo, i, i + 1, cfg_.hardware);
            lk.pairs.assign(code_.n(), {0, 0});
            lk.m_alice.assign(code_.n(), 0);
            lk.m_bob.assign(code_.n(), 0);
            heralds_.emplace_back(topo.links[i].length_km, code_.n(), cfg_.hardware);
        }
        for (std::size_t i = 0; i < nl; ++i) {
            heralds_[i].start(tl_, eng_, [this, i](std::size_t slot, Key a, Key b) {
                on_pair(i, slot, a, b);
            });
        }

        tl_.run_until_idle();
        record_.counters = eng_.counters();
        return std::move(record_);
    }

  private:
    void on_pair(std::size_t li, std::size_t slot, Key a, Key b) {
        LinkRt& lk = links_[li];
        lk.pairs[slot] = {a, b};
        if (++lk.pairs_up < lk.pairs.size()) return;

        for (auto& pr : lk.pairs) {
            lk.comm_left.push_back(pr.first);
            lk.comm_right.push_back(pr.second);
        }
        if (hook_ && *hook_) {
            std::vector<Key> keys = lk.comm_left;
            keys.insert(keys.end(), lk.comm_right.begin(), lk.comm_right.end());
            fire_hook(FaultStage::PairsReady, li, keys);
        }
        link_phase(li);
    }

    // Runs the whole local part of one link in zero simulated time: block
    // preparation, the teleported CNOT's gates, and both measurement rounds.
    void link_phase(std::size_t li) {
        LinkRt& lk = links_[li];
        TimePs now = tl_.now();
        std::size_t n = code_.n();

        EncodeResult el =
            encode_zero(code_, eng_, now, cfg_.protocol.ft_mode, cfg_.protocol.prep_retry_cap);
        if (!el.ok) {
            fail(EpisodeFailure::PrepFailure);
            return;
        }
        EncodeResult er =
            encode_zero(code_, eng_, now, cfg_.protocol.ft_mode, cfg_.protocol.prep_retry_cap);
        if (!er.ok) {
            fail(EpisodeFailure::PrepFailure);
            return;
        }
        lk.data_left = std::move(el.data);
        lk.data_right = std::move(er.data);
        transversal_h(code_, eng_, lk.data_left, now);

        if (hook_ && *hook_) {
            std::vector<Key> keys = lk.data_left;
            keys.insert(keys.end(), lk.data_right.begin(), lk.data_right.end());
            keys.insert(keys.end(), lk.comm_left.begin(), lk.comm_left.end());
            keys.insert(keys.end(), lk.comm_right.begin(), lk.comm_right.end());
            fire_hook(FaultStage::Encoded, li, keys);
        }

        for (std::size_t j = 0; j < n; ++j) eng_.gate_cnot(lk.data_left[j], lk.comm_left[j], now);
        for (std::size_t j = 0; j < n; ++j) eng_.gate_cnot(lk.comm_right[j], lk.data_right[j], now);
        for (std::size_t j = 0; j < n; ++j) lk.m_alice[j] = eng_.measure(lk.comm_left[j], Basis::Z, now);
        for (std::size_t j = 0; j < n; ++j) lk.m_bob[j] = eng_.measure(lk.comm_right[j], Basis::X, now);
        for (std::size_t j = 0; j < n; ++j) {
            eng_.release(lk.comm_left[j]);
            eng_.release(lk.comm_right[j]);
        }

        send(ProtocolMessage::Kind::TcnotAliceResult, li, li + 1, lk.lat_s, [this, li] {
            LinkRt& l = links_[li];
            for (std::size_t j = 0; j < l.data_right.size(); ++j)
                if (l.m_alice[j]) eng_.frame_pauli(l.data_right[j], 'X');
            if (++l.corrections_in == 2) after_corrections(li);
        });
        send(ProtocolMessage::Kind::TcnotBobResult, li + 1, li, lk.lat_s, [this, li] {
            LinkRt& l = links_[li];
            for (std::size_t j = 0; j < l.data_left.size(); ++j)
                if (l.m_bob[j]) eng_.frame_pauli(l.data_left[j], 'Z');
            if (++l.corrections_in == 2) after_corrections(li);
        });
    }

    void after_corrections(std::size_t li) {
        LinkRt& lk = links_[li];
        if (hook_ && *hook_) {
            std::vector<Key> keys = lk.data_left;
            keys.insert(keys.end(), lk.data_right.begin(), lk.data_right.end());
            fire_hook(FaultStage::TcnotCorrected, li, keys);
        }
        auto bump = [this, li] {
            if (++links_[li].dones_in == 2) link_done(li);
        };
        send(ProtocolMessage::Kind::TcnotDone, li, li + 1, lk.lat_s, bump);
        send(ProtocolMessage::Kind::TcnotDone, li + 1, li, lk.lat_s, bump);
    }

    void link_done(std::size_t li) {
        links_[li].done = true;
        try_swap(li);
        try_swap(li + 1);
        if (li == 0) check_completion();
    }

    void try_swap(std::size_t node) {
        std::size_t nn = cfg_.topology.num_nodes();
        if (node < 1 || node + 1 >= nn) return;
        if (!links_[node - 1].done || !links_[node].done) return;
        if (!swapped_.insert(node).second) return;
        do_swap(node);
    }

    void do_swap(std::size_t node) {
        TimePs now = tl_.now();
        std::vector<Key>& left = links_[node - 1].data_right;
        std::vector<Key>& right = links_[node].data_left;
        // Bell measurement in the standard gate set: transversal CNOT, then
        // the control block rotates through H and both blocks read out in Z.
        transversal_cnot(code_, eng_, left, right, now);
        transversal_h(code_, eng_, left, now);

        if (hook_ && *hook_) {
            std::vector<Key> keys = left;
            keys.insert(keys.end(), right.begin(), right.end());
            fire_hook(FaultStage::BeforeSwapMeasure, node, keys);
        }

        std::uint8_t mx = 0, mz = 0;
        for (std::size_t j = 0; j < left.size(); ++j)
            mx |= static_cast<std::uint8_t>(eng_.measure(left[j], Basis::Z, now)) << j;
        for (std::size_t j = 0; j < right.size(); ++j)
            mz |= static_cast<std::uint8_t>(eng_.measure(right[j], Basis::Z, now)) << j;
        for (Key k : left) eng_.release(k);
        for (Key k : right) eng_.release(k);

        MeasuredBlock rx = code_.correct_and_extract(mx, cfg_.protocol.cec_mode);
        MeasuredBlock rz = code_.correct_and_extract(mz, cfg_.protocol.cec_mode);
        record_.nonzero_syndromes += (rx.syndrome != 0) + (rz.syndrome != 0);

        double lat = classical_latency(cfg_.topology, node, 0, cfg_.hardware);
        int bx = rx.logical_bit, bz = rz.logical_bit;
        send(ProtocolMessage::Kind::QreFrame, node, 0, lat,
             [this, node, bx, bz] { on_frame(node, bx, bz); });
    }

    void on_frame(std::size_t node, int bx, int bz) {
        if (!frames_seen_.insert(node).second)
            throw std::logic_error("episode: duplicate frame contribution");
        record_.frame_bits.emplace_back(bx, bz);
        agg_bx_ ^= bx;
        agg_bz_ ^= bz;
        check_completion();
    }

    void check_completion() {
        if (finished_) return;
        if (!links_[0].done) return;
        if (frames_seen_.size() + 2 != cfg_.topology.num_nodes()) return;
        finished_ = true;

        std::vector<Key>& left = links_.front().data_left;
        std::vector<Key>& right = links_.back().data_right;
        TimePs now = tl_.now();
        for (Key k : left) eng_.touch(k, now);
        for (Key k : right) eng_.touch(k, now);
        for (Key k : left) {
            if (agg_bx_) eng_.frame_pauli(k, 'Z');
            if (agg_bz_) eng_.frame_pauli(k, 'X');
        }

        record_.success = true;
        record_.latency_s = to_seconds(now);
        record_.fidelity = extract_fidelity(code_, qm_, left, right, fid_rng_);
        tl_.clear_pending();
    }

    void fail(EpisodeFailure kind) {
        if (finished_) return;
        finished_ = true;
        record_.success = false;
        record_.failure = kind;
        record_.fidelity = 0.0;
        record_.latency_s = to_seconds(tl_.now());
        tl_.clear_pending();
    }

    void send(ProtocolMessage::Kind kind, std::size_t from, std::size_t to, double latency_s,
              std::function<void()> action) {
        ProtocolMessage msg;
        msg.kind = kind;
        msg.sender = from;
        msg.receiver = to;
        msg.send_time = tl_.now();
        msg.arrival_time = tl_.now() + to_ps(latency_s);
        tl_.schedule(to_ps(latency_s), [this, msg, action = std::move(action)] {
            record_.message_log.push_back(msg);
            record_.messages++;
            action();
        });
    }

    void fire_hook(FaultStage stage, std::size_t index, const std::vector<Key>& keys) {
        FaultPoint fp{stage, index, &keys};
        (*hook_)(fp, qm_);
    }

    SimConfig cfg_;
    const FaultHook* hook_;
    Timeline tl_;
    QuantumManager qm_;
    NoiseEngine eng_;
    RngStream fid_rng_;
    const CssCode& code_;
    std::vector<LinkRt> links_;
    std::vector<HeraldedLink> heralds_;
    std::unordered_set<std::size_t> swapped_;
    std::unordered_set<std::size_t> frames_seen_;
    int agg_bx_ = 0;
    int agg_bz_ = 0;
    bool finished_ = false;
    RunRecord record_;
};

}  // namespace

RunRecord run_episode(const SimConfig& cfg, std::uint64_t seed, const FaultHook* hook) {
    EpisodeRunner runner(cfg, seed, hook);
    return runner.run();
}

}  // namespace qrsim
