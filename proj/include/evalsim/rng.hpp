#ifndef EVALSIM_RNG_HPP_
#define EVALSIM_RNG_HPP_

#include <array>
#include <cstdint>

namespace evalsim {

// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random source: xoshiro256++ seeded from a
// (master_seed, stream_index) pair through the splitmix64 finalizer.
// Identical pairs yield identical byte streams on every platform.
// Streams with distinct indices are statistically independent; a
// source is single-owner and never shared across threads.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t master_seed, std::uint64_t stream_index = 0);

    std::uint64_t next_u64();

    // Uniform on [0,1) with 53-bit resolution.
    double next_double();

    // Uniform on the open interval (0,1); safe to feed through logs
    // and normal quantiles.
    double next_open();

    // Source for a nested task. Children of distinct indices, and of
    // distinct parents, are independent streams.
    RandomSource child(std::uint64_t index) const;

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::array<std::uint64_t, 4> state_;
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
};

RandomSource derive_stream(std::uint64_t master_seed, std::uint64_t stream_index);

}  // namespace evalsim

#endif  // EVALSIM_RNG_HPP_
