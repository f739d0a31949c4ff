#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace qrsim {

/// Simulation time in integer picoseconds.
using TimePs = std::int64_t;

constexpr TimePs to_ps(double seconds) {
    return static_cast<TimePs>(seconds * 1e12 + 0.5);
}
constexpr double to_seconds(TimePs t) { return static_cast<double>(t) * 1e-12; }

struct SchedulingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EventHandle {
    std::uint64_t id = 0;
};

/// Single-threaded discrete-event loop. Events fire in (time, sequence) order,
/// so same-timestamp events run in the order they were scheduled. One Timeline
/// per trajectory; cross-trajectory parallelism happens above this layer.
class Timeline {
  public:
    Timeline() = default;

    EventHandle schedule(TimePs delay, std::function<void()> action);
    void cancel(EventHandle h);

    /// Drains the queue. Returns the timestamp of the last executed event.
    TimePs run_until_idle();

    /// Drops every pending event. Used when an episode reaches a terminal state.
    void clear_pending();

    TimePs now() const { return now_; }
    std::uint64_t events_executed() const { return executed_; }

  private:
    struct Pending {
        TimePs fire_time;
        std::uint64_t seq;
        std::function<void()> action;
        bool operator>(const Pending& o) const {
            if (fire_time != o.fire_time) return fire_time > o.fire_time;
            return seq > o.seq;
        }
    };

    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    TimePs now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t executed_ = 0;
};

}  // namespace qrsim
