#include "offerset/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "offerset/errors.hpp"

namespace offerset {

namespace {

// C(n, k) saturating at 2^63-ish to keep the guard comparison safe.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc *= static_cast<long double>(n - k + i);
    acc /= static_cast<long double>(i);
    if (acc > 9e18L) return std::uint64_t{9'000'000'000'000'000'000ULL};
  }
  return static_cast<std::uint64_t>(acc + 0.5L);
}

}  // namespace

std::vector<std::uint64_t> ideal_sample(const ItemUniverse& universe,
                                        const UserMixture& mixture, const ChoiceModel& model,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint64_t> out;
  std::uint64_t single[1];
  for (std::size_t i = 0; i < universe.size(); ++i) {
    single[0] = universe.id_at(i);
    double g = 0.0;
    for (std::size_t t = 0; t < mixture.size(); ++t)
      g += model.reward(universe, single, mixture.type(t));
    g /= static_cast<double>(mixture.size());
    if (unif(rng) < g) out.push_back(single[0]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

OfferSet exhaustive_opt(const ItemUniverse& universe, std::size_t k,
                        const UserMixture& mixture, const ChoiceModel& model,
                        std::uint64_t guard) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::uint64_t count = binomial(universe.size(), std::min(k, universe.size()));
  if (count > guard)
    throw GuardError("exhaustive search over C(" + std::to_string(universe.size()) + ", " +
                     std::to_string(k) + ") = " + std::to_string(count) +
                     " subsets exceeds the guard of " + std::to_string(guard));

  OfferSet best;  // empty set, value 0
  best.value = mixture_objective(universe, {}, mixture, model);

  std::size_t n = universe.size();
  std::vector<std::size_t> combo;
  std::vector<std::uint64_t> items;
  for (std::size_t size = 1; size <= std::min(k, n); ++size) {
    combo.resize(size);
    for (std::size_t i = 0; i < size; ++i) combo[i] = i;
    for (;;) {
      items.clear();
      for (std::size_t idx : combo) items.push_back(universe.id_at(idx));
      double value = mixture_objective(universe, items, mixture, model);
      if (value > best.value) {
        best.value = value;
        best.items = items;
        std::sort(best.items.begin(), best.items.end());
      }
      // next combination in lexicographic order
      std::size_t pos = size;
      while (pos > 0 && combo[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++combo[pos - 1];
      for (std::size_t j = pos; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return best;
}

InclusionEstimate estimate_inclusion(
    const std::function<std::vector<std::uint64_t>(std::size_t)>& sampler,
    const ItemUniverse& universe, std::size_t reps) {
  if (reps < 2) throw std::invalid_argument("estimate_inclusion: need at least 2 replications");
  std::vector<std::uint64_t> counts(universe.size(), 0);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (std::uint64_t id : sampler(rep)) {
      auto idx = universe.index_of(id);
      if (!idx)
        throw std::invalid_argument("sampler returned unknown item " + std::to_string(id));
      ++counts[*idx];
    }
  }
  InclusionEstimate est;
  est.ids = universe.ids();
  est.replications = reps;
  est.frequency.resize(universe.size());
  est.standard_error.resize(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    double f = static_cast<double>(counts[i]) / static_cast<double>(reps);
    est.frequency[i] = f;
    est.standard_error[i] = std::sqrt(f * (1.0 - f) / static_cast<double>(reps));
  }
  return est;
}

SaaGapStats saa_gap(const ChoiceModel& model, const ItemUniverse& universe,
                    const UserMixture& ground_truth, std::size_t m, std::size_t k,
                    std::size_t trials, std::mt19937_64& rng, bool resample) {
  if (m < 1 || m > ground_truth.size())
    throw std::invalid_argument("saa_gap: m must lie in [1, ground truth support]");
  if (trials < 1) throw std::invalid_argument("saa_gap: need at least one trial");

  OfferSet truth = exhaustive_opt(universe, k, ground_truth, model);

  bool full_support = (m == ground_truth.size() && !resample);
  std::size_t effective_trials = full_support ? 1 : trials;

  std::uniform_int_distribution<std::size_t> pick(0, ground_truth.size() - 1);
  std::vector<double> gaps;
  gaps.reserve(effective_trials);
  for (std::size_t trial = 0; trial < effective_trials; ++trial) {
    std::vector<UnitVector> types;
    types.reserve(m);
    if (full_support) {
      for (std::size_t i = 0; i < m; ++i) types.push_back(ground_truth.type_vector(i));
    } else {
      for (std::size_t i = 0; i < m; ++i)
        types.push_back(ground_truth.type_vector(pick(rng)));
    }
    UserMixture sampled(std::move(types));
    OfferSet chosen = exhaustive_opt(universe, k, sampled, model);
    double true_value = chosen.items.empty()
                            ? mixture_objective(universe, {}, ground_truth, model)
                            : mixture_objective(universe, chosen.items, ground_truth, model);
    gaps.push_back(std::max(0.0, truth.value - true_value));
  }

  SaaGapStats stats;
  stats.sample_size = m;
  stats.trials = effective_trials;
  double sum = 0.0;
  for (double g : gaps) sum += g;
  stats.mean_gap = sum / static_cast<double>(gaps.size());
  double var = 0.0;
  for (double g : gaps) var += (g - stats.mean_gap) * (g - stats.mean_gap);
  if (gaps.size() > 1) var /= static_cast<double>(gaps.size() - 1);
  stats.se_gap = std::sqrt(var / static_cast<double>(gaps.size()));
  return stats;
}

}  // namespace offerset
