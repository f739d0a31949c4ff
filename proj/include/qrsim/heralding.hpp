#pragma once

#include <cstddef>
#include <functional>

#include "qrsim/config.hpp"
#include "qrsim/noise.hpp"
#include "qrsim/timeline.hpp"

namespace qrsim {

/// Heralded Bell-pair generation for one elementary link. Each of the
/// `num_slots` pair slots runs independent attempts in parallel; an attempt
/// takes one fixed period (photon round trip plus preparation) and succeeds
/// with the two-photon coincidence probability. On success the slot stops
/// and hands the fresh (already noise-corrupted) pair to the callback.
class HeraldedLink {
  public:
    /// slot index, left-end key, right-end key; fires at pair creation time.
    using PairCallback = std::function<void(std::size_t, Key, Key)>;

    HeraldedLink(double length_km, std::size_t num_slots, const HardwareProfile& profile);

    double success_prob() const { return p_; }
    TimePs attempt_period() const { return period_; }

    /// Schedules the first attempt of every slot, one period from now.
    void start(Timeline& tl, NoiseEngine& eng, PairCallback on_pair);

  private:
    void schedule_attempt(Timeline& tl, NoiseEngine& eng, std::size_t slot);

    double p_;
    TimePs period_;
    std::size_t slots_;
    PairCallback cb_;
};

}  // namespace qrsim
