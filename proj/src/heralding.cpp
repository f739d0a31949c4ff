#include "qrsim/heralding.hpp"

namespace qrsim {

HeraldedLink::HeraldedLink(double length_km, std::size_t num_slots,
                           const HardwareProfile& profile)
    : p_(herald_success_prob(profile, length_km)),
      period_(to_ps(herald_attempt_period_s(profile, length_km))),
      slots_(num_slots) {}

void HeraldedLink::start(Timeline& tl, NoiseEngine& eng, PairCallback on_pair) {
    cb_ = std::move(on_pair);
    for (std::size_t s = 0; s < slots_; ++s) schedule_attempt(tl, eng, s);
}

void HeraldedLink::schedule_attempt(Timeline& tl, NoiseEngine& eng, std::size_t slot) {
    tl.schedule(period_, [this, &tl, &eng, slot] {
        ++eng.counters().herald_attempts;
        if (eng.rng().bernoulli(p_)) {
            auto [left, right] = eng.bell_pair(tl.now());
            cb_(slot, left, right);
        } else {
            schedule_attempt(tl, eng, slot);
        }
    });
}

}  // namespace qrsim
