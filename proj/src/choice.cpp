#include "offerset/choice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "offerset/rng.hpp"

namespace offerset {

void TruncatedMnlParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  // Inner products live in [-1, 1]; keeping sigma above 2e-3 keeps
  // exp(inner / sigma) finite in double precision.
  if (sigma < 2e-3) throw std::invalid_argument("sigma below supported minimum 0.002");
  if (!(w >= 0.0)) throw std::invalid_argument("w must be nonnegative");
  if (!(theta > 0.0 && theta <= 2.0)) throw std::invalid_argument("theta must lie in (0, 2]");
}

void RevenueMnlParams::validate() const {
  if (!(w >= 0.0)) throw std::invalid_argument("w must be nonnegative");
  for (const auto& [id, r] : revenues) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("revenue for item " + std::to_string(id) +
                                  " must be finite and nonnegative");
  }
}

double RevenueMnlParams::revenue_ratio() const {
  if (revenues.empty()) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& [id, r] : revenues) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (hi == 0.0) return 1.0;
  return lo / hi;
}

double ChoiceModel::reward(const ItemUniverse& universe,
                           std::span<const std::uint64_t> items,
                           std::span<const double> type) const {
  double state[kMaxStateSize];
  std::span<double> st(state, state_size());
  reset_state(st);
  for (std::uint64_t id : items) {
    add_item(st, dot(universe.embedding_of(id), type), id);
  }
  return reward_from_state(st);
}

TruncatedMnl::TruncatedMnl(TruncatedMnlParams params) : params_(params) {
  params_.validate();
}

void TruncatedMnl::add_item(std::span<double> state, double inner, std::uint64_t) const {
  if (inner > 0.0) state[0] += std::exp(inner / params_.sigma);
}

double TruncatedMnl::reward_from_state(std::span<const double> state) const {
  if (state[0] <= 0.0) return 0.0;
  return state[0] / (params_.w + state[0]);
}

RevenueMnl::RevenueMnl(RevenueMnlParams params) : params_(std::move(params)) {
  params_.validate();
}

void RevenueMnl::add_item(std::span<double> state, double inner, std::uint64_t id) const {
  auto it = params_.revenues.find(id);
  if (it == params_.revenues.end())
    throw std::invalid_argument("missing revenue for item " + std::to_string(id));
  double e = std::exp(inner);
  state[0] += it->second * e;
  state[1] += e;
}

double RevenueMnl::reward_from_state(std::span<const double> state) const {
  if (state[1] <= 0.0) return 0.0;  // empty assortment
  return state[0] / (params_.w + state[1]);
}

namespace {

void validate_items(const ItemUniverse& universe, std::span<const std::uint64_t> items) {
  std::vector<std::uint64_t> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("offer set contains a duplicate item");
  for (std::uint64_t id : sorted) (void)universe.embedding_of(id);
}

}  // namespace

double mixture_objective(const ItemUniverse& universe, std::span<const std::uint64_t> items,
                         const UserMixture& mixture, const ChoiceModel& model) {
  if (mixture.dim() != universe.dim())
    throw std::invalid_argument("mixture/universe dimension mismatch");
  validate_items(universe, items);
  double total = 0.0;
  for (std::size_t i = 0; i < mixture.size(); ++i)
    total += model.reward(universe, items, mixture.type(i));
  return total / static_cast<double>(mixture.size());
}

double marginal_gain(const ItemUniverse& universe, std::span<const std::uint64_t> items,
                     std::uint64_t candidate, const UserMixture& mixture,
                     const ChoiceModel& model) {
  for (std::uint64_t id : items)
    if (id == candidate)
      throw std::invalid_argument("candidate already in the offer set");
  std::vector<std::uint64_t> extended(items.begin(), items.end());
  extended.push_back(candidate);
  return mixture_objective(universe, extended, mixture, model) -
         mixture_objective(universe, items, mixture, model);
}

DecayFunction::DecayFunction(std::function<double(double)> fn, double cutoff)
    : fn_(std::move(fn)), cutoff_(cutoff) {
  if (!fn_) throw std::invalid_argument("decay function: empty evaluator");
  if (!(cutoff_ >= 0.0)) throw std::invalid_argument("decay function: negative cutoff");
}

double DecayFunction::operator()(double x) const {
  if (x < 0.0) {
    if (x < -1e-12) throw std::invalid_argument("decay function: negative distance");
    x = 0.0;
  }
  if (x >= cutoff_) return 0.0;
  return std::clamp(fn_(x), 0.0, 1.0);
}

DecayFunction DecayFunction::indicator(double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("indicator radius must be nonnegative");
  double cutoff = radius + 1e-9;
  return DecayFunction([radius](double x) { return x <= radius ? 1.0 : 0.0; }, cutoff);
}

DecayFunction DecayFunction::scaled(const DecayFunction& p, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  return DecayFunction([p, factor](double x) { return std::min(factor * p(x), 1.0); },
                       p.cutoff());
}

DecayFunction DecayFunction::zero() {
  return DecayFunction([](double) { return 0.0; }, 0.0);
}

DecayFunction decay_from_truncated_mnl(const TruncatedMnlParams& params) {
  params.validate();
  double sigma = params.sigma;
  double w = params.w;
  return DecayFunction(
      [sigma, w](double x) {
        double e = std::exp((1.0 - 0.5 * x * x) / sigma);
        return e / (w + e);
      },
      params.theta);
}

bool is_non_increasing(const DecayFunction& p, std::size_t grid_points, double tol) {
  double hi = std::max(p.cutoff(), 1e-9);
  double prev = p(0.0);
  for (std::size_t i = 1; i <= grid_points; ++i) {
    double x = hi * static_cast<double>(i) / static_cast<double>(grid_points);
    double v = p(x);
    if (v > prev + tol) return false;
    prev = v;
  }
  return true;
}

SubmodularConditionResult check_submodular_condition(const ItemUniverse& universe,
                                                     const RevenueMnlParams& params,
                                                     std::size_t k,
                                                     std::span<const UnitVector> test_types) {
  params.validate();
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (params.revenues.find(universe.id_at(i)) == params.revenues.end())
      throw std::invalid_argument("missing revenue for item " +
                                  std::to_string(universe.id_at(i)));
  }

  SubmodularConditionResult result;
  result.revenue_ratio = params.revenue_ratio();
  if (universe.size() == 0) return result;

  std::size_t take = std::min(k, universe.size());
  std::vector<std::pair<double, std::size_t>> scored(universe.size());
  for (std::size_t t = 0; t < test_types.size(); ++t) {
    const auto& u = test_types[t];
    if (u.dim() != universe.dim())
      throw std::invalid_argument("test type dimension mismatch");
    for (std::size_t i = 0; i < universe.size(); ++i)
      scored[i] = {dot(universe.embedding(i), u.span()), i};
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    // Conversion is increasing in the attraction mass, so the top-k
    // assortment maximizes it for this type.
    double mass = 0.0;
    for (std::size_t j = 0; j < take; ++j) mass += std::exp(scored[j].first);
    double conversion = mass / (params.w + mass);
    if (conversion > result.max_conversion) {
      result.max_conversion = conversion;
      result.witness_items.clear();
      for (std::size_t j = 0; j < take; ++j)
        result.witness_items.push_back(universe.id_at(scored[j].second));
      std::sort(result.witness_items.begin(), result.witness_items.end());
      result.witness_type = static_cast<int>(t);
    }
  }

  result.holds = result.revenue_ratio + 1e-12 >= result.max_conversion;
  if (result.holds) {
    result.witness_items.clear();
    result.witness_type = -1;
  }
  return result;
}

SubmodularConditionResult check_submodular_condition(const ItemUniverse& universe,
                                                     const RevenueMnlParams& params,
                                                     std::size_t k, std::size_t random_types,
                                                     std::uint64_t seed) {
  std::vector<UnitVector> types;
  types.reserve(universe.size() + random_types);
  for (std::size_t i = 0; i < universe.size(); ++i) types.push_back(universe.unit_vector(i));
  std::mt19937_64 rng(mix_seed(seed, streams::kData));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t t = 0; t < random_types && universe.dim() >= 2; ++t) {
    std::vector<double> g(universe.dim());
    for (double& x : g) x = normal(rng);
    types.push_back(UnitVector::normalized(g));
  }
  return check_submodular_condition(universe, params, k, types);
}

}  // namespace offerset
