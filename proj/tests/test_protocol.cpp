#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qrsim/episode.hpp"

using namespace qrsim;

namespace {

HardwareProfile clean_hardware() {
    HardwareProfile p;
    p.f_1q = 1.0;
    p.f_2q = 1.0;
    p.f_meas = 1.0;
    p.f_init = 1.0;
    p.f_phys = 1.0;
    p.t1 = 1e300;
    p.t2 = 1e300;
    return p;
}

SimConfig clean_cfg(std::size_t nodes, double link_km = 20.0) {
    SimConfig cfg;
    cfg.topology = Topology::chain(nodes, link_km);
    cfg.hardware = clean_hardware();
    return cfg;
}

SimConfig default_cfg(std::size_t nodes, double link_km = 20.0) {
    SimConfig cfg;
    cfg.topology = Topology::chain(nodes, link_km);
    return cfg;
}

constexpr TimePs kHopPs = 170'000'000;     // 20 km link, one classical hop
constexpr TimePs kPeriodPs = 2'200'000'000;  // heralding attempt period

}  // namespace

TEST_CASE("noiseless two-node episode") {
    SimConfig cfg = clean_cfg(2);
    RunRecord r = run_episode(cfg, 42);

    CHECK(r.success);
    CHECK(r.failure == EpisodeFailure::None);
    CHECK(r.fidelity == 1.0);
    CHECK(r.frame_bits.empty());
    CHECK(r.nonzero_syndromes == 0);
    CHECK(r.messages == 4);
    REQUIRE(r.message_log.size() == 4);

    CHECK(r.counters.one_q == 13);
    CHECK(r.counters.two_q == 36);
    CHECK(r.counters.meas == 16);
    CHECK(r.counters.qubits == 30);
    CHECK(r.counters.prep_attempts == 2);
    CHECK(r.counters.herald_attempts >= 7);

    for (const auto& m : r.message_log) CHECK(m.arrival_time - m.send_time == kHopPs);

    // Completion is the last TCNOT handshake arrival: the link's local phase
    // happened two classical hops earlier, on the heralding attempt grid.
    TimePs done = r.message_log.back().arrival_time;
    CHECK(to_seconds(done) == r.latency_s);
    CHECK((done - 2 * kHopPs) % kPeriodPs == 0);
}

TEST_CASE("noiseless chains give unit fidelity at several sizes") {
    for (std::size_t nodes : {3u, 4u, 6u}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            CAPTURE(nodes);
            CAPTURE(seed);
            RunRecord r = run_episode(clean_cfg(nodes), seed);
            REQUIRE(r.success);
            CHECK(r.fidelity == 1.0);
            CHECK(r.nonzero_syndromes == 0);
            CHECK(r.frame_bits.size() == nodes - 2);
        }
    }
}

TEST_CASE("frame convention covers all four contribution cases") {
    // Swap outcomes are uniformly random even without noise; across enough
    // seeds every (b_x, b_z) combination shows up and the frame must absorb
    // each one exactly.
    SimConfig cfg = clean_cfg(3);
    std::set<std::pair<int, int>> seen;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        RunRecord r = run_episode(cfg, seed);
        REQUIRE(r.success);
        REQUIRE(r.frame_bits.size() == 1);
        CHECK(r.fidelity == 1.0);
        seen.insert(r.frame_bits[0]);
    }
    CHECK(seen.size() == 4);
}

TEST_CASE("single faults anywhere are repaired end to end") {
    SimConfig cfg = clean_cfg(3);
    struct Probe {
        FaultStage stage;
        std::size_t index;
        int key;
        char letter;
    };
    const Probe probes[] = {
        {FaultStage::PairsReady, 0, 3, 'X'},
        {FaultStage::PairsReady, 1, 12, 'Y'},
        {FaultStage::Encoded, 0, 20, 'Z'},
        {FaultStage::Encoded, 1, 5, 'X'},
        {FaultStage::TcnotCorrected, 0, 2, 'Y'},
        {FaultStage::TcnotCorrected, 1, 9, 'Z'},
        {FaultStage::BeforeSwapMeasure, 1, 0, 'X'},
        {FaultStage::BeforeSwapMeasure, 1, 13, 'Z'},
    };
    for (const Probe& p : probes) {
        CAPTURE(int(p.stage));
        CAPTURE(p.key);
        CAPTURE(p.letter);
        FaultHook hook = [&](const FaultPoint& fp, QuantumManager& qm) {
            if (fp.stage == p.stage && fp.index == p.index)
                qm.apply_pauli((*fp.keys)[p.key], p.letter);
        };
        RunRecord r = run_episode(cfg, 11, &hook);
        REQUIRE(r.success);
        CHECK(r.fidelity == 1.0);
    }
}

TEST_CASE("classical correction is what repairs a readout-bound fault") {
    SimConfig cfg = clean_cfg(3);
    // One X right before the swap readout flips a single outcome bit.
    FaultHook hook = [](const FaultPoint& fp, QuantumManager& qm) {
        if (fp.stage == FaultStage::BeforeSwapMeasure) qm.apply_pauli((*fp.keys)[0], 'X');
    };

    RunRecord with = run_episode(cfg, 21, &hook);
    REQUIRE(with.success);
    CHECK(with.nonzero_syndromes == 1);
    CHECK(with.fidelity == 1.0);

    cfg.protocol.cec_mode = CecMode::None;
    RunRecord without = run_episode(cfg, 21, &hook);
    REQUIRE(without.success);
    CHECK(without.fidelity == 0.0);
}

TEST_CASE("double faults defeat the distance-three protection") {
    SimConfig cfg = clean_cfg(3);

    // Two flips on one measured block: the decoder "fixes" a third position
    // and the extracted parity goes wrong.
    FaultHook swap_pair = [](const FaultPoint& fp, QuantumManager& qm) {
        if (fp.stage == FaultStage::BeforeSwapMeasure) {
            qm.apply_pauli((*fp.keys)[0], 'X');
            qm.apply_pauli((*fp.keys)[1], 'X');
        }
    };
    RunRecord r1 = run_episode(cfg, 31, &swap_pair);
    REQUIRE(r1.success);
    CHECK(r1.fidelity == 0.0);

    // Same story on an endpoint block, where ideal recovery does the decode.
    FaultHook end_pair = [](const FaultPoint& fp, QuantumManager& qm) {
        if (fp.stage == FaultStage::TcnotCorrected && fp.index == 0) {
            qm.apply_pauli((*fp.keys)[0], 'X');
            qm.apply_pauli((*fp.keys)[1], 'X');
        }
    };
    RunRecord r2 = run_episode(cfg, 31, &end_pair);
    REQUIRE(r2.success);
    CHECK(r2.fidelity == 0.0);
}

TEST_CASE("matched seeds give identical latency in both decode modes") {
    SimConfig cec = default_cfg(3);
    SimConfig none = default_cfg(3);
    none.protocol.cec_mode = CecMode::None;

    for (std::uint64_t seed = 100; seed < 115; ++seed) {
        RunRecord a = run_episode(cec, seed);
        RunRecord b = run_episode(none, seed);
        REQUIRE(a.success);
        REQUIRE(b.success);
        CHECK(a.latency_s == b.latency_s);
        CHECK(a.counters.herald_attempts == b.counters.herald_attempts);
        REQUIRE(a.message_log.size() == b.message_log.size());
        for (std::size_t i = 0; i < a.message_log.size(); ++i) {
            CHECK(a.message_log[i].arrival_time == b.message_log[i].arrival_time);
            CHECK(a.message_log[i].kind == b.message_log[i].kind);
        }
    }
}

TEST_CASE("preparation failure aborts the episode") {
    SimConfig cfg = clean_cfg(2);
    cfg.hardware.f_meas = 0.0;  // verification reads back garbage every time
    cfg.protocol.prep_retry_cap = 5;

    RunRecord r = run_episode(cfg, 5);
    CHECK_FALSE(r.success);
    CHECK(r.failure == EpisodeFailure::PrepFailure);
    CHECK(r.fidelity == 0.0);
    CHECK(r.counters.prep_attempts == 5);
    CHECK(r.messages == 0);
}

TEST_CASE("timeout fires when pairs never herald") {
    SimConfig cfg = clean_cfg(2);
    cfg.hardware.eta_d = 0.0;
    cfg.protocol.episode_timeout_s = 0.05;

    RunRecord r = run_episode(cfg, 5);
    CHECK_FALSE(r.success);
    CHECK(r.failure == EpisodeFailure::Timeout);
    CHECK(r.latency_s == doctest::Approx(0.05));
    CHECK(r.messages == 0);
    CHECK(r.counters.herald_attempts > 100);  // 7 slots kept trying
}

TEST_CASE("operation counts by preparation mode") {
    SimConfig cfg = clean_cfg(2);

    cfg.protocol.ft_mode = FtMode::Minimal;
    RunRecord m = run_episode(cfg, 8);
    CHECK(m.counters.one_q == 13);
    CHECK(m.counters.two_q == 36);
    CHECK(m.counters.meas == 16);
    CHECK(m.counters.qubits == 30);

    cfg.protocol.ft_mode = FtMode::None;
    RunRecord n = run_episode(cfg, 8);
    CHECK(n.counters.one_q == 13);
    CHECK(n.counters.two_q == 30);
    CHECK(n.counters.meas == 14);
    CHECK(n.counters.qubits == 28);

    cfg.protocol.ft_mode = FtMode::Standard;
    RunRecord s = run_episode(cfg, 8);
    CHECK(s.counters.one_q == 13);
    CHECK(s.counters.two_q == 54);
    CHECK(s.counters.meas == 22);
    CHECK(s.counters.qubits == 36);
}

TEST_CASE("records are reproducible from the seed") {
    SimConfig cfg = default_cfg(3);
    RunRecord a = run_episode(cfg, 777);
    RunRecord b = run_episode(cfg, 777);
    CHECK(a.success == b.success);
    CHECK(a.fidelity == b.fidelity);
    CHECK(a.latency_s == b.latency_s);
    CHECK(a.nonzero_syndromes == b.nonzero_syndromes);
    CHECK(a.frame_bits == b.frame_bits);
    CHECK(a.counters.total_ops() == b.counters.total_ops());
    CHECK(a.counters.herald_attempts == b.counters.herald_attempts);
}

TEST_CASE("per-episode seeds decorrelate") {
    CHECK(episode_seed(1, 0) != episode_seed(1, 1));
    CHECK(episode_seed(1, 0) != episode_seed(2, 0));
    CHECK(episode_seed(5, 3) == episode_seed(5, 3));
}

TEST_CASE("hooks fire at every boundary with the advertised keys") {
    SimConfig cfg = clean_cfg(3);
    std::map<std::pair<FaultStage, std::size_t>, std::size_t> sizes;
    int all_live = 0, total_keys = 0;

    FaultHook hook = [&](const FaultPoint& fp, QuantumManager& qm) {
        sizes[{fp.stage, fp.index}] = fp.keys->size();
        for (Key k : *fp.keys) {
            ++total_keys;
            if (qm.exists(k)) ++all_live;
        }
    };
    RunRecord r = run_episode(cfg, 4, &hook);
    REQUIRE(r.success);

    REQUIRE(sizes.size() == 7);
    CHECK(sizes[{FaultStage::PairsReady, 0}] == 14);
    CHECK(sizes[{FaultStage::PairsReady, 1}] == 14);
    CHECK(sizes[{FaultStage::Encoded, 0}] == 28);
    CHECK(sizes[{FaultStage::Encoded, 1}] == 28);
    CHECK(sizes[{FaultStage::TcnotCorrected, 0}] == 14);
    CHECK(sizes[{FaultStage::TcnotCorrected, 1}] == 14);
    CHECK(sizes[{FaultStage::BeforeSwapMeasure, 1}] == 14);
    CHECK(all_live == total_keys);
}

TEST_CASE("noisy default chain smoke run") {
    SimConfig cfg = default_cfg(5);
    RunRecord r = run_episode(cfg, 7);
    REQUIRE(r.success);
    CHECK(r.latency_s > 0.0);
    CHECK(r.latency_s < 1.0);
    // Per-trajectory overlap lands on the quarter grid.
    double grid = r.fidelity * 4.0;
    CHECK(grid == std::floor(grid));
    CHECK(r.fidelity >= 0.0);
    CHECK(r.fidelity <= 1.0);
    // Retries can only add operations beyond the first-attempt floor.
    CHECK(r.counters.one_q >= 73);
    CHECK(r.counters.two_q >= 165);
    CHECK(r.counters.meas >= 106);
    CHECK(r.counters.qubits >= 120);
    CHECK(r.frame_bits.size() == 3);
}

TEST_CASE("fidelity extraction on hand-built blocks") {
    QuantumManager qm;
    NoiseEngine eng(qm, clean_hardware(), 3);
    const CssCode& code = CssCode::by_name("steane713");

    auto mk = [&] {
        EncodeResult res = encode_zero(code, eng, 0, FtMode::Minimal, 10);
        REQUIRE(res.ok);
        return res.data;
    };
    std::vector<Key> left = mk();
    std::vector<Key> right = mk();
    transversal_h(code, eng, left, 0);
    transversal_cnot(code, eng, left, right, 0);

    RngStream rng(17);
    CHECK(extract_fidelity(code, qm, left, right, rng) == 1.0);

    // A logical X on one side turns the state into the wrong Bell pair.
    for (Key k : left) qm.apply_pauli(k, 'X');
    CHECK(extract_fidelity(code, qm, left, right, rng) == 0.0);
}
