#include "offerset/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "offerset/parallel.hpp"
#include "offerset/rng.hpp"

namespace offerset {

namespace {

constexpr double kGainFloor = -1e-12;   // treat gains above this as nonnegative
constexpr double kGainSlack = 1e-9;     // tolerance for the non-increasing check

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Shared scaffolding for both greedy variants: candidate ids, their
// per-type inner products, and the per-type accumulator of the current set.
struct GreedyWorkspace {
  std::vector<std::uint64_t> ids;   // sorted unique candidates
  std::size_t m = 0;
  std::size_t state_size = 0;
  std::vector<double> inners;       // ids.size() x m
  std::vector<double> states;       // m x state_size
  std::vector<double> type_values;  // reward per type for the current set
  double current_value = 0.0;       // mixture objective of the current set

  GreedyWorkspace(const ItemUniverse& universe, std::span<const std::uint64_t> candidates,
                  const UserMixture& mixture, const ChoiceModel& model) {
    if (mixture.dim() != universe.dim())
      throw std::invalid_argument("mixture/universe dimension mismatch");
    ids.assign(candidates.begin(), candidates.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    m = mixture.size();
    state_size = model.state_size();
    if (state_size > ChoiceModel::kMaxStateSize)
      throw std::invalid_argument("choice model state too large");

    inners.resize(ids.size() * m);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto emb = universe.embedding_of(ids[i]);
      for (std::size_t t = 0; t < m; ++t) inners[i * m + t] = dot(emb, mixture.type(t));
    }
    states.resize(m * state_size);
    type_values.resize(m);
    for (std::size_t t = 0; t < m; ++t) {
      std::span<double> st(states.data() + t * state_size, state_size);
      model.reset_state(st);
      type_values[t] = model.reward_from_state(st);
    }
    current_value = mean(type_values);
  }

  static double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }

  // Mixture objective if candidate i were added to the current set.
  double value_with(const ChoiceModel& model, std::size_t i) const {
    double buf[ChoiceModel::kMaxStateSize];
    double total = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      const double* st = states.data() + t * state_size;
      for (std::size_t s = 0; s < state_size; ++s) buf[s] = st[s];
      std::span<double> sp(buf, state_size);
      model.add_item(sp, inners[i * m + t], ids[i]);
      total += model.reward_from_state(sp);
    }
    return total / static_cast<double>(m);
  }

  void commit(const ChoiceModel& model, std::size_t i) {
    for (std::size_t t = 0; t < m; ++t) {
      std::span<double> st(states.data() + t * state_size, state_size);
      model.add_item(st, inners[i * m + t], ids[i]);
      type_values[t] = model.reward_from_state(st);
    }
    current_value = mean(type_values);
  }
};

void check_non_increasing(double gain, double prev_gain, std::size_t step) {
  if (step > 0 && gain > prev_gain + kGainSlack)
    throw std::logic_error("greedy gains increased at step " + std::to_string(step) +
                           "; objective is not submodular");
}

}  // namespace

void PruneConfig::validate() const {
  if (!(epsilon1 > 0.0 && epsilon1 <= 1.0))
    throw std::invalid_argument("epsilon1 must lie in (0, 1]");
  if (!(epsilon2 > 0.0 && epsilon2 <= 1.0))
    throw std::invalid_argument("epsilon2 must lie in (0, 1]");
  if (!(sampling_floor > 0.0 && sampling_floor <= 1.0))
    throw std::invalid_argument("sampling floor must lie in (0, 1]");
  if (s_override && *s_override < 1)
    throw std::invalid_argument("sample override must be at least 1");
}

std::size_t required_samples(std::size_t k, double sampling_floor, double epsilon1,
                             double epsilon2) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  PruneConfig probe{epsilon1, epsilon2, sampling_floor, std::nullopt};
  probe.validate();
  double kk = static_cast<double>(k);
  double raw = kk / (sampling_floor * epsilon2) * std::log(kk / epsilon1);
  double s = std::ceil(raw - 1e-9);
  return s < 1.0 ? 1 : static_cast<std::size_t>(s);
}

std::vector<std::uint64_t> prune(std::span<const LssIndex> ensemble,
                                 const UserMixture& mixture, std::mt19937_64& rng) {
  if (ensemble.empty()) throw std::invalid_argument("prune: empty ensemble");
  std::uniform_int_distribution<std::size_t> pick(0, mixture.size() - 1);
  std::vector<std::uint64_t> out;
  for (const auto& index : ensemble) {
    auto hits = index.query(mixture.type(pick(rng)));
    out.insert(out.end(), hits.begin(), hits.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OfferSet greedy(const ItemUniverse& universe, std::span<const std::uint64_t> candidates,
                std::size_t k, const UserMixture& mixture, const ChoiceModel& model) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (candidates.empty()) return {};
  GreedyWorkspace ws(universe, candidates, mixture, model);

  std::vector<bool> used(ws.ids.size(), false);
  OfferSet offer;
  double prev_gain = 0.0;
  for (std::size_t step = 0; step < k && offer.items.size() < ws.ids.size(); ++step) {
    std::size_t best = ws.ids.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < ws.ids.size(); ++i) {
      if (used[i]) continue;
      double gain = ws.value_with(model, i) - ws.current_value;
      if (best == ws.ids.size() || gain > best_gain) {
        best = i;
        best_gain = gain;
      }
    }
    if (best_gain < kGainFloor) break;
    check_non_increasing(best_gain, prev_gain, step);
    prev_gain = best_gain;
    used[best] = true;
    offer.items.push_back(ws.ids[best]);
    ws.commit(model, best);
  }
  std::sort(offer.items.begin(), offer.items.end());
  offer.value = ws.current_value;
  return offer;
}

OfferSet lazy_greedy(const ItemUniverse& universe, std::span<const std::uint64_t> candidates,
                     std::size_t k, const UserMixture& mixture, const ChoiceModel& model) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (candidates.empty()) return {};
  GreedyWorkspace ws(universe, candidates, mixture, model);

  struct Entry {
    double gain;
    std::size_t index;
    std::size_t stamp;
  };
  // Max-heap on gain; among equal gains the smallest id (smallest index,
  // ids are sorted) wins, matching plain greedy's scan order.
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.index > b.index;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < ws.ids.size(); ++i)
    heap.push({ws.value_with(model, i) - ws.current_value, i, 0});

  OfferSet offer;
  double prev_gain = 0.0;
  std::size_t selected = 0;
  while (selected < k && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    if (top.stamp != selected) {
      // Stale bound: re-score against the current set and push back.
      double gain = ws.value_with(model, top.index) - ws.current_value;
      heap.push({gain, top.index, selected});
      continue;
    }
    if (top.gain < kGainFloor) break;
    check_non_increasing(top.gain, prev_gain, selected);
    prev_gain = top.gain;
    offer.items.push_back(ws.ids[top.index]);
    ws.commit(model, top.index);
    ++selected;
  }
  std::sort(offer.items.begin(), offer.items.end());
  offer.value = ws.current_value;
  return offer;
}

RecommendResult recommend(std::span<const LssIndex> ensemble, const UserMixture& mixture,
                          std::size_t k, const PruneConfig& config, const ChoiceModel& model,
                          const ItemUniverse& universe, std::mt19937_64& rng) {
  config.validate();
  std::size_t needed = config.s_override
                           ? *config.s_override
                           : required_samples(k, config.sampling_floor, config.epsilon1,
                                              config.epsilon2);
  if (ensemble.size() < needed)
    throw std::invalid_argument("recommend: ensemble of " + std::to_string(ensemble.size()) +
                                " members, " + std::to_string(needed) + " required");

  RecommendResult result;
  result.ensemble_size = ensemble.size();
  double t0 = now_seconds();
  auto candidates = prune(ensemble, mixture, rng);
  double t1 = now_seconds();
  result.offer = lazy_greedy(universe, candidates, k, mixture, model);
  double t2 = now_seconds();
  result.candidate_count = candidates.size();
  result.prune_seconds = t1 - t0;
  result.greedy_seconds = t2 - t1;
  return result;
}

std::vector<LssIndex> build_ensemble(const ItemUniverse& universe, const LevelPlan& plan,
                                     std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("ensemble: count must be at least 1");
  std::vector<std::optional<LssIndex>> slots(count);
  parallel_for(count, [&](std::size_t i) {
    slots[i].emplace(LssIndex::build(universe, plan, mix_seed(seed, streams::kEnsemble, i)));
  });
  std::vector<LssIndex> ensemble;
  ensemble.reserve(count);
  for (auto& slot : slots) ensemble.push_back(std::move(*slot));
  return ensemble;
}

}  // namespace offerset
