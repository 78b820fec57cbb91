// Hyperplane locality-sensitive hashing: a single family function maps a
// vector to the sign of its inner product with a random Gaussian
// direction, and a table set amplifies that with `key_bits` functions per
// table across `table_count` tables over an independent subsample of the
// universe.
#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "offerset/geometry.hpp"
#include "offerset/serialize.hpp"

namespace offerset {

// Collision probability of one hyperplane function for unit vectors at
// distance x: 1 - arccos(1 - x^2/2) / pi.
double collision_prob(double x);

class HyperplaneTableSet {
 public:
  // Structure over items retained independently with probability
  // `sample_rate`; each of `table_count` tables keys items by the signs of
  // `key_bits` independent hyperplanes. key_bits is capped at 64.
  HyperplaneTableSet(std::size_t dim, double sample_rate, std::uint32_t key_bits,
                     std::uint32_t table_count, std::uint64_t seed);

  static HyperplaneTableSet build(const ItemUniverse& universe, double sample_rate,
                                  std::uint32_t key_bits, std::uint32_t table_count,
                                  std::uint64_t seed);

  // Membership of the rho-subsample is a pure function of (seed, id).
  bool in_sample(std::uint64_t id) const;

  // Inserts when the id belongs to the subsample; returns whether it did.
  bool insert_if_sampled(std::uint64_t id, std::span<const double> embedding);

  // Removes a stored item from every table; no-op when absent.
  bool remove(std::uint64_t id);

  // All stored items whose full key matches the query's in at least one
  // table, deduplicated and sorted by id.
  std::vector<std::uint64_t> query(std::span<const double> point) const;

  bool stores(std::uint64_t id) const { return items_.count(id) != 0; }
  std::span<const double> embedding_of(std::uint64_t id) const;
  std::size_t item_count() const { return items_.size(); }
  std::vector<std::uint64_t> sampled_ids() const;  // sorted
  std::size_t table_slot_count() const;            // total stored (item, table) slots

  std::size_t dim() const { return dim_; }
  double sample_rate() const { return sample_rate_; }
  std::uint32_t key_bits() const { return key_bits_; }
  std::uint32_t table_count() const { return table_count_; }
  std::uint64_t seed() const { return seed_; }

  // Canonical binary form ("LSH1"): identical structures serialize to
  // identical bytes regardless of construction order.
  void serialize(BinaryWriter& w) const;
  static HyperplaneTableSet deserialize(BinaryReader& r);

 private:
  std::uint64_t key_for(std::size_t table, std::span<const double> point) const;

  std::size_t dim_ = 0;
  double sample_rate_ = 0.0;
  std::uint32_t key_bits_ = 0;
  std::uint32_t table_count_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> directions_;  // [table][function][dim] flattened
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint64_t>>> tables_;
  std::unordered_map<std::uint64_t, std::vector<double>> items_;
};

}  // namespace offerset
