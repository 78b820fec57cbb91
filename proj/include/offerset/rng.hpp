// Seed derivation and per-id Bernoulli draws.
//
// Index structures decide membership of an item by hashing (seed, stream,
// item_id) instead of consuming a shared RNG stream. Rebuilding with the
// same seed therefore reproduces the structure exactly, and incremental
// inserts land items in the same subsamples a fresh build would have
// chosen.
#pragma once

#include <cstdint>
#include <random>

namespace offerset {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + kGolden));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

// Top 53 bits as a uniform double in [0, 1).
inline double u01(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Deterministic Bernoulli(prob) draw keyed by (seed, stream, id).
inline bool id_bernoulli(std::uint64_t seed, std::uint64_t stream, std::uint64_t id,
                         double prob) {
  return u01(splitmix64(seed ^ splitmix64(stream ^ splitmix64(id)))) < prob;
}

// Stream tags to keep draws of different purposes independent.
namespace streams {
inline constexpr std::uint64_t kSample = 0x5a17c0de01ULL;
inline constexpr std::uint64_t kDirections = 0x5a17c0de02ULL;
inline constexpr std::uint64_t kBaseline = 0x5a17c0de03ULL;
inline constexpr std::uint64_t kLevel = 0x5a17c0de04ULL;
inline constexpr std::uint64_t kEnsemble = 0x5a17c0de05ULL;
inline constexpr std::uint64_t kReplication = 0x5a17c0de06ULL;
inline constexpr std::uint64_t kUser = 0x5a17c0de07ULL;
inline constexpr std::uint64_t kData = 0x5a17c0de08ULL;
inline constexpr std::uint64_t kPrune = 0x5a17c0de09ULL;
}  // namespace streams

}  // namespace offerset
