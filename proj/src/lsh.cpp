#include "offerset/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "offerset/errors.hpp"
#include "offerset/rng.hpp"

namespace offerset {

double collision_prob(double x) {
  if (!(x >= -1e-9 && x <= 2.0 + 1e-9))
    throw std::invalid_argument("collision_prob: distance outside [0, 2]");
  x = std::clamp(x, 0.0, 2.0);
  double cosang = std::clamp(1.0 - 0.5 * x * x, -1.0, 1.0);
  return 1.0 - std::acos(cosang) / std::numbers::pi;
}

HyperplaneTableSet::HyperplaneTableSet(std::size_t dim, double sample_rate,
                                       std::uint32_t key_bits, std::uint32_t table_count,
                                       std::uint64_t seed)
    : dim_(dim),
      sample_rate_(sample_rate),
      key_bits_(key_bits),
      table_count_(table_count),
      seed_(seed) {
  if (dim_ < 1) throw std::invalid_argument("lsh: dimension must be positive");
  if (!(sample_rate_ >= 0.0 && sample_rate_ <= 1.0))
    throw std::invalid_argument("lsh: sample rate outside [0, 1]");
  if (key_bits_ < 1) throw std::invalid_argument("lsh: key bits must be at least 1");
  if (key_bits_ > 64)
    throw GuardError("lsh: key width " + std::to_string(key_bits_) + " exceeds the 64-bit cap");
  if (table_count_ < 1) throw std::invalid_argument("lsh: table count must be at least 1");

  directions_.resize(static_cast<std::size_t>(table_count_) * key_bits_ * dim_);
  std::mt19937_64 rng(mix_seed(seed_, streams::kDirections));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : directions_) x = normal(rng);
  tables_.resize(table_count_);
}

HyperplaneTableSet HyperplaneTableSet::build(const ItemUniverse& universe, double sample_rate,
                                             std::uint32_t key_bits, std::uint32_t table_count,
                                             std::uint64_t seed) {
  HyperplaneTableSet set(universe.dim(), sample_rate, key_bits, table_count, seed);
  for (std::size_t i = 0; i < universe.size(); ++i)
    set.insert_if_sampled(universe.id_at(i), universe.embedding(i));
  return set;
}

bool HyperplaneTableSet::in_sample(std::uint64_t id) const {
  return id_bernoulli(seed_, streams::kSample, id, sample_rate_);
}

std::uint64_t HyperplaneTableSet::key_for(std::size_t table,
                                          std::span<const double> point) const {
  std::uint64_t key = 0;
  const double* dir = directions_.data() + table * key_bits_ * dim_;
  for (std::uint32_t f = 0; f < key_bits_; ++f, dir += dim_) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) s += dir[j] * point[j];
    // Zero inner products hash positive so rebuilds stay reproducible.
    if (s >= 0.0) key |= (std::uint64_t{1} << f);
  }
  return key;
}

bool HyperplaneTableSet::insert_if_sampled(std::uint64_t id, std::span<const double> embedding) {
  if (embedding.size() != dim_) throw std::invalid_argument("lsh: embedding dimension mismatch");
  if (!in_sample(id)) return false;
  if (items_.count(id) != 0)
    throw std::invalid_argument("lsh: item " + std::to_string(id) + " already stored");
  items_.emplace(id, std::vector<double>(embedding.begin(), embedding.end()));
  for (std::size_t t = 0; t < table_count_; ++t)
    tables_[t][key_for(t, embedding)].push_back(id);
  return true;
}

bool HyperplaneTableSet::remove(std::uint64_t id) {
  auto it = items_.find(id);
  if (it == items_.end()) return false;
  std::span<const double> embedding = it->second;
  for (std::size_t t = 0; t < table_count_; ++t) {
    auto bucket = tables_[t].find(key_for(t, embedding));
    if (bucket == tables_[t].end()) continue;
    auto& ids = bucket->second;
    ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
    if (ids.empty()) tables_[t].erase(bucket);
  }
  items_.erase(it);
  return true;
}

std::vector<std::uint64_t> HyperplaneTableSet::query(std::span<const double> point) const {
  if (point.size() != dim_) throw std::invalid_argument("lsh: query dimension mismatch");
  std::vector<std::uint64_t> out;
  for (std::size_t t = 0; t < table_count_; ++t) {
    auto bucket = tables_[t].find(key_for(t, point));
    if (bucket == tables_[t].end()) continue;
    out.insert(out.end(), bucket->second.begin(), bucket->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::span<const double> HyperplaneTableSet::embedding_of(std::uint64_t id) const {
  auto it = items_.find(id);
  if (it == items_.end())
    throw std::invalid_argument("lsh: item " + std::to_string(id) + " not stored");
  return it->second;
}

std::vector<std::uint64_t> HyperplaneTableSet::sampled_ids() const {
  std::vector<std::uint64_t> ids;
  ids.reserve(items_.size());
  for (const auto& [id, emb] : items_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t HyperplaneTableSet::table_slot_count() const {
  std::size_t slots = 0;
  for (const auto& table : tables_)
    for (const auto& [key, ids] : table) slots += ids.size();
  return slots;
}

void HyperplaneTableSet::serialize(BinaryWriter& w) const {
  w.magic("LSH1");
  w.u64(seed_);
  w.f64(sample_rate_);
  w.u32(key_bits_);
  w.u32(table_count_);
  w.u32(static_cast<std::uint32_t>(dim_));
  auto ids = sampled_ids();
  w.u64(ids.size());
  for (std::uint64_t id : ids) {
    w.u64(id);
    for (double x : items_.at(id)) w.f64(x);
  }
  for (double x : directions_) w.f64(x);
  for (const auto& table : tables_) {
    std::vector<std::uint64_t> keys;
    keys.reserve(table.size());
    for (const auto& [key, bucket] : table) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    w.u64(keys.size());
    for (std::uint64_t key : keys) {
      const auto& bucket = table.at(key);
      std::vector<std::uint64_t> sorted(bucket.begin(), bucket.end());
      std::sort(sorted.begin(), sorted.end());
      w.u64(key);
      w.u64(sorted.size());
      for (std::uint64_t id : sorted) w.u64(id);
    }
  }
}

HyperplaneTableSet HyperplaneTableSet::deserialize(BinaryReader& r) {
  r.expect_magic("LSH1");
  std::uint64_t seed = r.u64();
  double rate = r.f64();
  std::uint32_t key_bits = r.u32();
  std::uint32_t table_count = r.u32();
  std::uint32_t dim = r.u32();
  HyperplaneTableSet set(dim, rate, key_bits, table_count, seed);
  std::uint64_t n_items = r.u64();
  for (std::uint64_t i = 0; i < n_items; ++i) {
    std::uint64_t id = r.u64();
    std::vector<double> emb(dim);
    for (double& x : emb) x = r.f64();
    set.items_.emplace(id, std::move(emb));
  }
  for (double& x : set.directions_) x = r.f64();
  for (std::uint32_t t = 0; t < table_count; ++t) {
    std::uint64_t n_keys = r.u64();
    for (std::uint64_t k = 0; k < n_keys; ++k) {
      std::uint64_t key = r.u64();
      std::uint64_t count = r.u64();
      auto& bucket = set.tables_[t][key];
      bucket.resize(count);
      for (std::uint64_t j = 0; j < count; ++j) bucket[j] = r.u64();
    }
  }
  return set;
}

}  // namespace offerset
