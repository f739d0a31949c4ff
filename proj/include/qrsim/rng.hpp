#pragma once

#include <cstdint>
#include <initializer_list>

namespace qrsim {

/// Splittable counter-style RNG. A master seed plus a tag path (entity ids)
/// deterministically derives an independent stream, so adding one entity never
/// perturbs the draws of another. Generator is xoshiro256**, seeded through
/// splitmix64 as its authors recommend.
class RngStream {
  public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed);

    /// Independent stream for (seed, tag0, tag1, ...).
    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

  private:
    std::uint64_t s_[4];
};

/// splitmix64 step; exposed because seed-mixing shows up in a few places.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace qrsim
