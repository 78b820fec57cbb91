// The end-to-end pipeline: ensemble pruning to a sub-linear candidate set,
// then greedy maximization of the mixture objective under a cardinality
// cap.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "offerset/choice.hpp"
#include "offerset/geometry.hpp"
#include "offerset/lss.hpp"

namespace offerset {

struct PruneConfig {
  double epsilon1 = 0.2;
  double epsilon2 = 0.05;
  // Per-draw inclusion floor as a fraction of the singleton reward; the
  // sampling structure guarantees 1/2.
  double sampling_floor = 0.5;
  std::optional<std::size_t> s_override;

  void validate() const;
};

// Draw count sufficient for the pruning guarantee:
// ceil((k / (floor * epsilon2)) * ln(k / epsilon1)), at least 1.
std::size_t required_samples(std::size_t k, double sampling_floor, double epsilon1,
                             double epsilon2);

struct OfferSet {
  std::vector<std::uint64_t> items;  // sorted by id, |items| <= k
  double value = 0.0;                // mixture objective of `items`
};

// One pruning pass: each ensemble member is queried at one uniformly drawn
// mixture type; the union of the draws is returned sorted by id.
std::vector<std::uint64_t> prune(std::span<const LssIndex> ensemble,
                                 const UserMixture& mixture, std::mt19937_64& rng);

// Plain greedy: k argmax steps over the candidates, ties broken toward the
// smallest id. Stops early when every remaining gain is negative.
OfferSet greedy(const ItemUniverse& universe, std::span<const std::uint64_t> candidates,
                std::size_t k, const UserMixture& mixture, const ChoiceModel& model);

// Lazy variant: identical selections via cached stale gains re-checked on
// demand. Requires non-increasing gains, which the run verifies.
OfferSet lazy_greedy(const ItemUniverse& universe, std::span<const std::uint64_t> candidates,
                     std::size_t k, const UserMixture& mixture, const ChoiceModel& model);

struct RecommendResult {
  OfferSet offer;
  std::size_t candidate_count = 0;
  std::size_t ensemble_size = 0;
  double prune_seconds = 0.0;
  double greedy_seconds = 0.0;
};

// Prune then lazy-greedy. The ensemble must contain at least
// required_samples members (or s_override when set).
RecommendResult recommend(std::span<const LssIndex> ensemble, const UserMixture& mixture,
                          std::size_t k, const PruneConfig& config, const ChoiceModel& model,
                          const ItemUniverse& universe, std::mt19937_64& rng);

// s independent indices over the same universe with derived seeds.
std::vector<LssIndex> build_ensemble(const ItemUniverse& universe, const LevelPlan& plan,
                                     std::size_t count, std::uint64_t seed);

}  // namespace offerset
