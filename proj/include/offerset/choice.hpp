// Choice-model evaluation: conversion and revenue objectives for a fixed
// user type, the uniform-mixture objective, and the singleton reward
// envelope used to plan sampling structures.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "offerset/geometry.hpp"

namespace offerset {

struct TruncatedMnlParams {
  double sigma = 1.0;  // Gumbel scale
  double w = 10.0;     // no-choice weight
  double theta = 1.4142135623730951;  // distance cutoff of the reward envelope

  void validate() const;
};

struct RevenueMnlParams {
  std::unordered_map<std::uint64_t, double> revenues;
  double w = 0.0;

  void validate() const;
  double revenue_ratio() const;  // r_min / r_max, 1.0 when degenerate
};

// Reward model f(S, u) evaluated through a small per-type accumulator so
// the greedy optimizer can score marginal items in O(1) per user type.
class ChoiceModel {
 public:
  virtual ~ChoiceModel() = default;

  virtual std::size_t state_size() const = 0;
  virtual void reset_state(std::span<double> state) const = 0;
  // Folds one offered item into the accumulator; `inner` is the item/type
  // inner product.
  virtual void add_item(std::span<double> state, double inner, std::uint64_t id) const = 0;
  virtual double reward_from_state(std::span<const double> state) const = 0;

  double reward(const ItemUniverse& universe, std::span<const std::uint64_t> items,
                std::span<const double> type) const;

  static constexpr std::size_t kMaxStateSize = 4;
};

/// Conversion under the truncated multinomial logit: items with
/// non-positive inner product contribute nothing, the rest weigh
/// exp(inner / sigma) against the no-choice weight w.
class TruncatedMnl final : public ChoiceModel {
 public:
  explicit TruncatedMnl(TruncatedMnlParams params);

  std::size_t state_size() const override { return 1; }
  void reset_state(std::span<double> state) const override { state[0] = 0.0; }
  void add_item(std::span<double> state, double inner, std::uint64_t id) const override;
  double reward_from_state(std::span<const double> state) const override;

  const TruncatedMnlParams& params() const { return params_; }

 private:
  TruncatedMnlParams params_;
};

/// Expected revenue under the plain multinomial logit. Not monotone
/// submodular in general; greedy guarantees apply only when
/// check_submodular_condition holds.
class RevenueMnl final : public ChoiceModel {
 public:
  explicit RevenueMnl(RevenueMnlParams params);

  std::size_t state_size() const override { return 2; }
  void reset_state(std::span<double> state) const override { state[0] = state[1] = 0.0; }
  void add_item(std::span<double> state, double inner, std::uint64_t id) const override;
  double reward_from_state(std::span<const double> state) const override;

  const RevenueMnlParams& params() const { return params_; }

 private:
  RevenueMnlParams params_;
};

// g(S): mean reward over the mixture types. Rejects duplicate or unknown
// items.
double mixture_objective(const ItemUniverse& universe, std::span<const std::uint64_t> items,
                         const UserMixture& mixture, const ChoiceModel& model);

// g(S + v) - g(S); rejects v already in S.
double marginal_gain(const ItemUniverse& universe, std::span<const std::uint64_t> items,
                     std::uint64_t candidate, const UserMixture& mixture,
                     const ChoiceModel& model);

/// Non-increasing map from user/item distance to [0, 1] with a finite
/// support cutoff; upper-bounds the singleton reward at that distance.
class DecayFunction {
 public:
  DecayFunction(std::function<double(double)> fn, double cutoff);

  double operator()(double x) const;
  double cutoff() const { return cutoff_; }

  static DecayFunction indicator(double radius);
  // min(factor * p(x), 1) with the same cutoff.
  static DecayFunction scaled(const DecayFunction& p, double factor);
  static DecayFunction zero();

 private:
  std::function<double(double)> fn_;
  double cutoff_;
};

// The exact singleton-conversion envelope of the truncated MNL:
// p(x) = e^{(1 - x^2/2)/sigma} / (w + e^{(1 - x^2/2)/sigma}) below theta,
// zero at and beyond it.
DecayFunction decay_from_truncated_mnl(const TruncatedMnlParams& params);

bool is_non_increasing(const DecayFunction& p, std::size_t grid_points = 1000,
                       double tol = 1e-12);

struct SubmodularConditionResult {
  bool holds = true;
  double revenue_ratio = 1.0;
  double max_conversion = 0.0;
  // Populated when the condition fails: the assortment and tested type
  // achieving the violating conversion.
  std::vector<std::uint64_t> witness_items;
  int witness_type = -1;
};

// Checks r_min / r_max >= max conversion over feasible assortments for the
// supplied test types. For a fixed type the maximizing assortment is the
// top-k by inner product, so the check is exact per type.
SubmodularConditionResult check_submodular_condition(const ItemUniverse& universe,
                                                     const RevenueMnlParams& params,
                                                     std::size_t k,
                                                     std::span<const UnitVector> test_types);

// Convenience overload: tests every item embedding as a type plus
// `random_types` seeded random directions.
SubmodularConditionResult check_submodular_condition(const ItemUniverse& universe,
                                                     const RevenueMnlParams& params,
                                                     std::size_t k,
                                                     std::size_t random_types = 64,
                                                     std::uint64_t seed = 1234);

}  // namespace offerset
