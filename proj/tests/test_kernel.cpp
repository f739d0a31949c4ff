#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qrsim/rng.hpp"
#include "qrsim/timeline.hpp"

using namespace qrsim;

TEST_CASE("events fire in time order with FIFO tie-break") {
    Timeline tl;
    std::vector<int> order;
    tl.schedule(to_ps(3e-6), [&] { order.push_back(3); });
    tl.schedule(to_ps(1e-6), [&] { order.push_back(1); });
    tl.schedule(to_ps(2e-6), [&] { order.push_back(2); });
    tl.schedule(to_ps(1e-6), [&] { order.push_back(11); });  // same time, scheduled later
    tl.run_until_idle();
    CHECK(order == std::vector<int>{1, 11, 2, 3});
}

TEST_CASE("handlers can schedule relative to now") {
    Timeline tl;
    std::vector<TimePs> fire_times;
    tl.schedule(to_ps(1e-6), [&] {
        fire_times.push_back(tl.now());
        tl.schedule(to_ps(5e-6), [&] { fire_times.push_back(tl.now()); });
    });
    TimePs end = tl.run_until_idle();
    REQUIRE(fire_times.size() == 2);
    CHECK(fire_times[0] == to_ps(1e-6));
    CHECK(fire_times[1] == to_ps(6e-6));
    CHECK(end == to_ps(6e-6));
    CHECK(tl.events_executed() == 2);
}

TEST_CASE("zero delay is allowed, negative delay is not") {
    Timeline tl;
    bool ran = false;
    tl.schedule(0, [&] { ran = true; });
    CHECK_THROWS_AS(tl.schedule(-1, [] {}), SchedulingError);
    tl.run_until_idle();
    CHECK(ran);
}

TEST_CASE("cancelled events do not fire") {
    Timeline tl;
    int hits = 0;
    EventHandle h = tl.schedule(to_ps(1e-6), [&] { ++hits; });
    tl.schedule(to_ps(2e-6), [&] { ++hits; });
    tl.cancel(h);
    tl.run_until_idle();
    CHECK(hits == 1);
}

TEST_CASE("cancellation from inside a handler") {
    Timeline tl;
    int hits = 0;
    EventHandle victim = tl.schedule(to_ps(2e-6), [&] { ++hits; });
    tl.schedule(to_ps(1e-6), [&] { tl.cancel(victim); });
    tl.run_until_idle();
    CHECK(hits == 0);
}

TEST_CASE("handler exceptions surface as SchedulingError") {
    Timeline tl;
    tl.schedule(to_ps(1e-6), [] { throw std::runtime_error("boom"); });
    CHECK_THROWS_AS(tl.run_until_idle(), SchedulingError);
}

TEST_CASE("clear_pending drops queued work but keeps the clock") {
    Timeline tl;
    int hits = 0;
    tl.schedule(to_ps(1e-6), [&] {
        ++hits;
        tl.schedule(to_ps(1e-6), [&] { ++hits; });
        tl.clear_pending();
    });
    TimePs end = tl.run_until_idle();
    CHECK(hits == 1);
    CHECK(end == to_ps(1e-6));
}

TEST_CASE("picosecond conversions round-trip typical delays") {
    CHECK(to_ps(1.0) == 1'000'000'000'000LL);
    CHECK(to_ps(170e-6) == 170'000'000LL);
    CHECK(to_seconds(to_ps(0.0022)) == doctest::Approx(0.0022).epsilon(1e-12));
}

TEST_CASE("identical seeds give identical streams") {
    RngStream a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ by any tag change") {
    std::set<std::uint64_t> firsts;
    firsts.insert(RngStream::derive(7, {1, 2, 3}).next_u64());
    firsts.insert(RngStream::derive(7, {1, 2, 4}).next_u64());
    firsts.insert(RngStream::derive(7, {1, 3, 2}).next_u64());
    firsts.insert(RngStream::derive(8, {1, 2, 3}).next_u64());
    firsts.insert(RngStream::derive(7, {1, 2}).next_u64());
    CHECK(firsts.size() == 5);
}

TEST_CASE("uniform stays in [0,1) and has a sane mean") {
    RngStream r(99);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("bernoulli edge cases and frequency") {
    RngStream r(5);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(r.bernoulli(0.0));
        CHECK(r.bernoulli(1.0));
    }
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ones += r.bernoulli(0.3) ? 1 : 0;
    double f = double(ones) / n;
    CHECK(std::abs(f - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST_CASE("below covers the full range without obvious bias") {
    RngStream r(17);
    std::vector<int> counts(10, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        std::uint64_t v = r.below(10);
        REQUIRE(v < 10);
        ++counts[v];
    }
    for (int c : counts) CHECK(std::abs(c - n / 10) < 5 * std::sqrt(n / 10.0));
    CHECK(r.below(1) == 0);
}
