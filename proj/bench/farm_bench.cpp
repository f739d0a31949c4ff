// Times the serial episode loop against the OpenMP farm on the same
// workload and confirms they produce identical aggregates.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrsim/sweep.hpp"

using namespace qrsim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t runs = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
    std::size_t links = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2;

    SimConfig cfg;
    cfg.topology = Topology::chain(links + 1, 20.0);

    auto t0 = std::chrono::steady_clock::now();
    BatchStats serial = run_batch_serial(cfg, runs, 1);
    double dt_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    BatchStats parallel = run_batch_parallel(cfg, runs, 1);
    double dt_parallel = seconds_since(t0);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif

    std::printf("workload: %llu episodes, %zu links\n", (unsigned long long)runs, links);
    std::printf("serial:   %.3f s  (%.1f eps/s)\n", dt_serial, runs / dt_serial);
    std::printf("parallel: %.3f s  (%.1f eps/s, %d threads)\n", dt_parallel, runs / dt_parallel,
                threads);
    std::printf("speedup:  %.2fx\n", dt_serial / dt_parallel);

    bool same = serial.successes == parallel.successes &&
                serial.fidelity.mean == parallel.fidelity.mean &&
                serial.fidelity.sd == parallel.fidelity.sd &&
                serial.latency_s.mean == parallel.latency_s.mean &&
                serial.counters.two_q == parallel.counters.two_q &&
                serial.counters.herald_attempts == parallel.counters.herald_attempts;
    std::printf("aggregates identical: %s\n", same ? "yes" : "NO");
    return same ? 0 : 1;
}
