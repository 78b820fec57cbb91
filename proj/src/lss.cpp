#include "offerset/lss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "offerset/errors.hpp"
#include "offerset/rng.hpp"

namespace offerset {

namespace {

constexpr double kRadiusClamp = 2.0 - 1e-9;
constexpr std::uint8_t kIndexFormatVersion = 1;

double level_threshold(std::uint32_t r) { return std::ldexp(1.0, -static_cast<int>(r)); }

double level_sample_rate(std::uint32_t r, std::uint32_t level_count) {
  if (r == level_count) return std::ldexp(1.0, -(static_cast<int>(level_count) - 1));
  return 1.0 / (std::ldexp(1.0, static_cast<int>(r)) - 1.0);
}

// sup { x : p(x) >= threshold }, assuming p(0) >= threshold and
// p(cutoff) = 0 < threshold.
double bisect_radius(const DecayFunction& p, double threshold) {
  double lo = 0.0;
  double hi = std::max(p.cutoff(), 1e-12);
  for (int iter = 0; iter < 64 && hi - lo > 1e-12; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (p(mid) >= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::size_t LevelPlan::active_count() const {
  std::size_t n = 0;
  for (const auto& lvl : levels)
    if (lvl.active) ++n;
  return n;
}

std::string LevelPlan::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "levels=%u active=%zu baseline_rate=%.6g", level_count(),
                active_count(), baseline_rate);
  std::string s = buf;
  for (const auto& lvl : levels) {
    if (!lvl.active) continue;
    std::snprintf(buf, sizeof(buf), "; r=%u rate=%.5g radius=%.5g bits=%u tables=%u",
                  lvl.level, lvl.sample_rate, lvl.radius, lvl.key_bits, lvl.table_count);
    s += buf;
  }
  return s;
}

LevelPlan plan_levels(const DecayFunction& p, std::size_t n, double beta, double c,
                      double delta, LevelCountRule rule) {
  if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in [0, 1)");
  if (!(c > 1.0)) throw std::invalid_argument("approximation factor must exceed 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!is_non_increasing(p, 256, 1e-9))
    throw std::invalid_argument("decay function is not non-increasing");

  LevelPlan plan;
  plan.item_count = n;
  plan.budget_exponent = beta;
  plan.approx_factor = c;
  plan.hash_exponent = delta;
  plan.rule = rule;
  if (n == 0) {
    plan.baseline_rate = 0.0;
    return plan;
  }
  plan.baseline_rate = 0.5 * std::pow(static_cast<double>(n), beta - 1.0);

  double log2n = std::log2(static_cast<double>(n));
  std::uint32_t level_count;
  if (rule == LevelCountRule::kBudgetFloor) {
    double r = std::floor((1.0 - beta) * log2n + 1e-9);
    level_count = r < 1.0 ? 0u : static_cast<std::uint32_t>(r);
  } else {
    level_count = static_cast<std::uint32_t>(std::ceil(1.0 + log2n - 1e-9));
  }

  double p0 = p(0.0);
  double n_pow = std::pow(static_cast<double>(n), beta - 1.0);
  for (std::uint32_t r = 1; r <= level_count; ++r) {
    LevelParams lvl;
    lvl.level = r;
    lvl.sample_rate = level_sample_rate(r, level_count);
    double threshold = level_threshold(r);
    if (p0 < threshold) {
      plan.levels.push_back(lvl);  // inactive: p never reaches this threshold
      continue;
    }
    lvl.active = true;
    lvl.radius = bisect_radius(p, threshold);

    double target = std::ldexp(1.0, static_cast<int>(r)) * n_pow;
    if (target >= 1.0) {
      lvl.key_bits = 1;
    } else {
      double q_far = collision_prob(std::min(c * lvl.radius, kRadiusClamp));
      double bits = std::log(target) / std::log(q_far);
      if (!(bits > 0.0) || bits > 64.0)
        throw GuardError("level " + std::to_string(r) + ": key width " +
                         std::to_string(bits) + " exceeds the 64-bit cap");
      lvl.key_bits = static_cast<std::uint32_t>(std::max(1.0, std::ceil(bits - 1e-9)));
    }

    double q_near = collision_prob(std::min(lvl.radius, kRadiusClamp));
    if (q_near < 1e-9)
      throw GuardError("level " + std::to_string(r) +
                       ": radius too close to 2, table count diverges");
    double tables = std::log(2.0) * std::pow(2.0, -static_cast<double>(r) * delta) *
                    std::pow(static_cast<double>(n), delta * (1.0 - beta)) / q_near;
    lvl.table_count = static_cast<std::uint32_t>(std::max(1.0, std::ceil(tables - 1e-9)));
    plan.levels.push_back(lvl);
  }
  return plan;
}

void LevelPlan::serialize(BinaryWriter& w) const {
  w.u64(item_count);
  w.f64(budget_exponent);
  w.f64(approx_factor);
  w.f64(hash_exponent);
  w.f64(baseline_rate);
  w.u8(static_cast<std::uint8_t>(rule));
  w.u32(level_count());
  for (const auto& lvl : levels) {
    w.u32(lvl.level);
    w.u8(lvl.active ? 1 : 0);
    w.f64(lvl.sample_rate);
    w.f64(lvl.radius);
    w.u32(lvl.key_bits);
    w.u32(lvl.table_count);
  }
}

LevelPlan LevelPlan::deserialize(BinaryReader& r) {
  LevelPlan plan;
  plan.item_count = r.u64();
  plan.budget_exponent = r.f64();
  plan.approx_factor = r.f64();
  plan.hash_exponent = r.f64();
  plan.baseline_rate = r.f64();
  plan.rule = static_cast<LevelCountRule>(r.u8());
  std::uint32_t count = r.u32();
  plan.levels.resize(count);
  for (auto& lvl : plan.levels) {
    lvl.level = r.u32();
    lvl.active = r.u8() != 0;
    lvl.sample_rate = r.f64();
    lvl.radius = r.f64();
    lvl.key_bits = r.u32();
    lvl.table_count = r.u32();
  }
  return plan;
}

LssIndex::LssIndex(LevelPlan plan, std::size_t dim, std::uint64_t seed)
    : plan_(std::move(plan)), dim_(dim), seed_(seed) {
  levels_.resize(plan_.level_count());
}

LssIndex LssIndex::build(const ItemUniverse& universe, const LevelPlan& plan,
                         std::uint64_t seed) {
  LssIndex index(plan, universe.dim(), seed);
  for (const auto& lvl : plan.levels) {
    if (!lvl.active) continue;
    index.levels_[lvl.level - 1].emplace(universe.dim(), lvl.sample_rate, lvl.key_bits,
                                         lvl.table_count,
                                         mix_seed(seed, streams::kLevel, lvl.level));
  }
  for (std::size_t i = 0; i < universe.size(); ++i)
    index.insert(universe.id_at(i), universe.embedding(i));
  return index;
}

bool LssIndex::contains(std::uint64_t id) const {
  if (std::binary_search(baseline_.begin(), baseline_.end(), id)) return true;
  for (const auto& lvl : levels_)
    if (lvl && lvl->stores(id)) return true;
  return false;
}

void LssIndex::insert(std::uint64_t id, std::span<const double> embedding) {
  if (embedding.size() != dim_) throw std::invalid_argument("index: embedding dimension mismatch");
  if (contains(id))
    throw std::invalid_argument("index: item " + std::to_string(id) + " already present");
  for (auto& lvl : levels_)
    if (lvl) lvl->insert_if_sampled(id, embedding);
  if (id_bernoulli(seed_, streams::kBaseline, id, plan_.baseline_rate)) {
    auto pos = std::lower_bound(baseline_.begin(), baseline_.end(), id);
    baseline_.insert(pos, id);
  }
}

void LssIndex::remove(std::uint64_t id) {
  for (auto& lvl : levels_)
    if (lvl) lvl->remove(id);
  auto pos = std::lower_bound(baseline_.begin(), baseline_.end(), id);
  if (pos != baseline_.end() && *pos == id) baseline_.erase(pos);
}

std::vector<std::uint64_t> LssIndex::query(const UnitVector& point) const {
  return query(point.span());
}

std::vector<std::uint64_t> LssIndex::query(std::span<const double> point) const {
  if (point.size() != dim_) throw std::invalid_argument("index: query dimension mismatch");
  std::vector<std::uint64_t> out(baseline_.begin(), baseline_.end());
  for (const auto& lvl : plan_.levels) {
    if (!lvl.active) continue;
    const auto& set = levels_[lvl.level - 1];
    auto hits = set->query(point);
    if (distance_filter_) {
      double max_d = std::min(plan_.approx_factor * lvl.radius, 2.0) + 1e-12;
      std::erase_if(hits, [&](std::uint64_t id) {
        double inner = dot(set->embedding_of(id), point);
        return distance_from_inner(inner) > max_d;
      });
    }
    out.insert(out.end(), hits.begin(), hits.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> LssIndex::query_level(std::uint32_t level,
                                                 std::span<const double> point) const {
  if (level < 1 || level > levels_.size())
    throw std::out_of_range("index: level out of range");
  const auto& set = levels_[level - 1];
  if (!set) return {};
  return set->query(point);
}

const HyperplaneTableSet* LssIndex::level_set(std::uint32_t level) const {
  if (level < 1 || level > levels_.size())
    throw std::out_of_range("index: level out of range");
  const auto& set = levels_[level - 1];
  return set ? &*set : nullptr;
}

std::vector<std::uint8_t> LssIndex::serialize() const {
  BinaryWriter w;
  w.magic("LSS1");
  w.u8(kIndexFormatVersion);
  w.u64(seed_);
  w.u32(static_cast<std::uint32_t>(dim_));
  plan_.serialize(w);
  w.u64(baseline_.size());
  for (std::uint64_t id : baseline_) w.u64(id);
  for (const auto& lvl : levels_)
    if (lvl) lvl->serialize(w);
  return w.take();
}

LssIndex LssIndex::deserialize(std::span<const std::uint8_t> bytes) {
  BinaryReader r(bytes);
  r.expect_magic("LSS1");
  std::uint8_t version = r.u8();
  if (version != kIndexFormatVersion)
    throw FormatError("index blob version " + std::to_string(version) + " unsupported");
  std::uint64_t seed = r.u64();
  std::uint32_t dim = r.u32();
  LevelPlan plan = LevelPlan::deserialize(r);
  LssIndex index(plan, dim, seed);
  std::uint64_t n_baseline = r.u64();
  index.baseline_.resize(n_baseline);
  for (auto& id : index.baseline_) id = r.u64();
  for (const auto& lvl : plan.levels) {
    if (!lvl.active) continue;
    index.levels_[lvl.level - 1].emplace(HyperplaneTableSet::deserialize(r));
  }
  if (!r.exhausted()) throw FormatError("index blob has trailing bytes");
  return index;
}

void LssIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write index file: " + path);
  auto bytes = serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to index file: " + path);
}

LssIndex LssIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open index file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace offerset
