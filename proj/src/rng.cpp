#include "evalsim/rng.hpp"

namespace evalsim {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomSource::RandomSource(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
    // Fold the pair into one seed word, then expand with a splitmix64
    // chain. The chain never produces the all-zero xoshiro state for
    // any input, but guard anyway.
    std::uint64_t x = mix64(master_seed + kGolden) ^ mix64(stream_index + 2 * kGolden);
    for (auto& word : state_) {
        x += kGolden;
        word = mix64(x);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = kGolden;
    }
}

std::uint64_t RandomSource::next_u64() {
    // xoshiro256++ step (Blackman & Vigna).
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomSource::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_open() {
    // (2k+1)/2^54 for k in [0, 2^53): never 0, never 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

RandomSource RandomSource::child(std::uint64_t index) const {
    const std::uint64_t folded =
        mix64(master_seed_ + kGolden) ^ mix64(stream_index_ + 2 * kGolden);
    return RandomSource(mix64(folded + 3 * kGolden), index);
}

RandomSource derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return RandomSource(master_seed, stream_index);
}

}  // namespace evalsim
