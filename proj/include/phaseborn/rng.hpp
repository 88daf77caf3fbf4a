#pragma once

#include <cstdint>
#include <random>

namespace phaseborn {

/// Generator used for every random draw in the engine.
using Engine = std::mt19937_64;

/// Number of samples drawn from a single substream. Sampling work is split
/// into blocks of this size; block b always uses substream b, so a batch is
/// identical whatever the number of workers.
inline constexpr std::size_t kBlockSize = 1024;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream `stream` derived from the user seed. Distinct streams of
/// the same seed get decorrelated seeds; stream 0 is not the raw seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine make_substream(std::uint64_t seed, std::uint64_t stream) {
    return Engine(substream_seed(seed, stream));
}

inline std::size_t block_count(std::size_t count) noexcept {
    return (count + kBlockSize - 1) / kBlockSize;
}

} // namespace phaseborn
