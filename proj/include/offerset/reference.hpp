// Exact, slow reference implementations used to validate the probabilistic
// and approximate components: direct Bernoulli sampling at the singleton
// reward, exhaustive enumeration of offer sets, inclusion-frequency
// estimation, and the sample-average-approximation gap study.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "offerset/choice.hpp"
#include "offerset/geometry.hpp"
#include "offerset/optimize.hpp"

namespace offerset {

// Includes each item independently with probability exactly g({v}).
std::vector<std::uint64_t> ideal_sample(const ItemUniverse& universe,
                                        const UserMixture& mixture, const ChoiceModel& model,
                                        std::mt19937_64& rng);

// Exact optimum over every subset of size <= k by enumeration. Rejects
// instances with C(n, k) beyond `guard`.
OfferSet exhaustive_opt(const ItemUniverse& universe, std::size_t k,
                        const UserMixture& mixture, const ChoiceModel& model,
                        std::uint64_t guard = 10'000'000);

struct InclusionEstimate {
  std::vector<std::uint64_t> ids;  // universe order
  std::vector<double> frequency;
  std::vector<double> standard_error;
  std::size_t replications = 0;
};

// Runs a black-box set sampler `reps` times (the replication number is
// passed in so the sampler can derive seeds) and reports per-item
// inclusion frequencies with binomial standard errors.
InclusionEstimate estimate_inclusion(
    const std::function<std::vector<std::uint64_t>(std::size_t)>& sampler,
    const ItemUniverse& universe, std::size_t reps);

struct SaaGapStats {
  std::size_t sample_size = 0;  // m
  double mean_gap = 0.0;        // E[OPT - g(S*_m)]
  double se_gap = 0.0;
  std::size_t trials = 0;
};

// Draws `m` i.i.d. types from the ground-truth mixture, solves the sampled
// problem exhaustively, and evaluates the chosen set under the truth. With
// m equal to the ground-truth support and `resample` off, the sampled
// problem is the exact problem and the gap is zero.
SaaGapStats saa_gap(const ChoiceModel& model, const ItemUniverse& universe,
                    const UserMixture& ground_truth, std::size_t m, std::size_t k,
                    std::size_t trials, std::mt19937_64& rng, bool resample = true);

}  // namespace offerset
