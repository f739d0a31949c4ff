#include "qrsim/timeline.hpp"

#include <string>

namespace qrsim {

EventHandle Timeline::schedule(TimePs delay, std::function<void()> action) {
    if (delay < 0)
        throw SchedulingError("negative event delay: " + std::to_string(delay) + " ps");
    std::uint64_t seq = next_seq_++;
    queue_.push(Pending{now_ + delay, seq, std::move(action)});
    return EventHandle{seq};
}

void Timeline::cancel(EventHandle h) { cancelled_.insert(h.id); }

TimePs Timeline::run_until_idle() {
    while (!queue_.empty()) {
        Pending ev = std::move(const_cast<Pending&>(queue_.top()));
        queue_.pop();
        if (cancelled_.erase(ev.seq)) continue;
        now_ = ev.fire_time;
        ++executed_;
        try {
            ev.action();
        } catch (const std::exception& e) {
            throw SchedulingError("event " + std::to_string(ev.seq) + " at t=" +
                                  std::to_string(ev.fire_time) + " ps failed: " + e.what());
        }
    }
    return now_;
}

void Timeline::clear_pending() {
    while (!queue_.empty()) queue_.pop();
    cancelled_.clear();
}

}  // namespace qrsim
