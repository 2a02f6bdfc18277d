#include "eprsim/rng.hpp"

namespace eprsim {

namespace {

inline std::uint64_t splitmix64(std::uint64_t &x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
    // Fold the stream index into the seeding sequence so that streams with
    // the same seed are decorrelated. splitmix64 cannot emit four zero
    // words in a row, so the xoshiro state is never all-zero.
    std::uint64_t x = seed;
    std::uint64_t mixed = splitmix64(x) ^ rotl(stream_index * 0x9E3779B97F4A7C15ULL + 1, 17);
    s_[0] = splitmix64(mixed);
    s_[1] = splitmix64(mixed);
    s_[2] = splitmix64(mixed);
    s_[3] = splitmix64(mixed);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

} // namespace eprsim
