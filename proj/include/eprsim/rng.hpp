#pragma once

#include <cstdint>

namespace eprsim {

/// Counter-seeded random stream: xoshiro256** state derived from
/// (seed, stream_index) through splitmix64. The same pair reproduces the
/// same sequence bit-exactly on every platform; distinct stream indices
/// give statistically independent streams, one per shot.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53 random bits.
    double next_double();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t s_[4];
};

} // namespace eprsim
