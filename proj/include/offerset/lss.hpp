// Locality-sensitive sampling: a leveled ensemble of hyperplane LSH
// structures whose union returns each item with probability at least
// p(distance)/2 for an arbitrary non-increasing decay p.
//
// Level r keeps an independent subsample of the universe at rate
//   rho_r = 1/(2^r - 1)  (last level: 1/2^{R-1})
// and targets the radius
//   radius_r = sup { x : p(x) >= 1/2^r },
// realized with key_bits_r = ceil(log_{q(c * radius_r)} (2^r n^{beta-1}))
// hyperplane functions per table and
// table_count_r = ceil(ln(2) * 2^{-r delta} n^{delta (1-beta)} / q(radius_r))
// tables, where q is the hyperplane collision law. A baseline subsample at
// rate n^{beta-1}/2 covers items the levels do not target.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "offerset/choice.hpp"
#include "offerset/geometry.hpp"
#include "offerset/lsh.hpp"
#include "offerset/serialize.hpp"

namespace offerset {

// Number of levels: the budget-floor rule floor(log2 n^{1-beta}) is the
// default; the table-ceiling rule ceil(1 + log2 n) is kept behind a switch
// for comparison runs.
enum class LevelCountRule : std::uint8_t { kBudgetFloor = 0, kTableCeil = 1 };

struct LevelParams {
  std::uint32_t level = 0;  // r, 1-based
  bool active = false;      // false when p never reaches 1/2^r
  double sample_rate = 0.0;
  double radius = 0.0;
  std::uint32_t key_bits = 0;
  std::uint32_t table_count = 0;
};

struct LevelPlan {
  std::size_t item_count = 0;
  double budget_exponent = 0.5;  // beta
  double approx_factor = 1.3;    // c
  double hash_exponent = 0.0;    // delta; 1/c for the hyperplane family
  double baseline_rate = 0.0;    // n^{beta-1} / 2
  LevelCountRule rule = LevelCountRule::kBudgetFloor;
  std::vector<LevelParams> levels;  // levels[r-1]

  std::uint32_t level_count() const { return static_cast<std::uint32_t>(levels.size()); }
  std::size_t active_count() const;
  std::string summary() const;

  void serialize(BinaryWriter& w) const;
  static LevelPlan deserialize(BinaryReader& r);
};

// Plans level parameters for decay p over n items. Radii are found by
// bisection to 1e-9; levels whose threshold p never reaches are marked
// inactive. The collision law is evaluated at min(c * radius, 2 - 1e-9) so
// radii at the far end of the sphere stay finite.
LevelPlan plan_levels(const DecayFunction& p, std::size_t n, double beta, double c,
                      double delta, LevelCountRule rule = LevelCountRule::kBudgetFloor);

/// The built sampling index for one seed. Queries are concurrent-read
/// safe; insert/remove need exclusive access.
class LssIndex {
 public:
  static LssIndex build(const ItemUniverse& universe, const LevelPlan& plan,
                        std::uint64_t seed);

  // Union of the baseline subsample and every level's collision set,
  // deduplicated and sorted by id.
  std::vector<std::uint64_t> query(const UnitVector& point) const;
  std::vector<std::uint64_t> query(std::span<const double> point) const;

  // One level's contribution (empty for inactive levels); diagnostics.
  std::vector<std::uint64_t> query_level(std::uint32_t level,
                                         std::span<const double> point) const;

  // Membership draws are keyed by (seed, id), so inserting items one by one
  // reproduces exactly the structure a fresh build over the larger
  // universe would produce.
  void insert(std::uint64_t id, std::span<const double> embedding);
  void remove(std::uint64_t id);  // idempotent
  bool contains(std::uint64_t id) const;

  const LevelPlan& plan() const { return plan_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::uint64_t>& baseline() const { return baseline_; }
  const HyperplaneTableSet* level_set(std::uint32_t level) const;

  // Drop returned items further than approx_factor * radius_r from the
  // query at each level (the baseline subsample is never filtered).
  void set_distance_filter(bool enabled) { distance_filter_ = enabled; }
  bool distance_filter() const { return distance_filter_; }

  std::vector<std::uint8_t> serialize() const;
  static LssIndex deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::string& path) const;
  static LssIndex load(const std::string& path);

 private:
  LssIndex(LevelPlan plan, std::size_t dim, std::uint64_t seed);

  LevelPlan plan_;
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  bool distance_filter_ = false;
  std::vector<std::optional<HyperplaneTableSet>> levels_;  // [r-1], nullopt inactive
  std::vector<std::uint64_t> baseline_;                    // sorted
};

}  // namespace offerset
