#pragma once

#include <cstdint>
#include <random>

namespace miscls {

// SplitMix64 scrambler; used to derive well-separated engine seeds from
// small user-facing seeds (0, 1, 2, ...).
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One mt19937_64 stream per (seed, stream_id) pair. Replication j of a
// simulation run uses stream (base_seed + j, 0); auxiliary draws (holdout
// covariates, validation splits) use distinct stream ids.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id = 0) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = seed ^ (0xA0761D6478BD642FULL + stream_id * 0xE7037ED1A0B428DBULL);
  std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

inline constexpr const char* kRngDescription = "mt19937_64/splitmix64-streams";

}  // namespace miscls
