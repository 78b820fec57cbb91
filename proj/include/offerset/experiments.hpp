// Experiment runners: the sampling-probability curve, the recommendation
// benchmark against the mean/last heuristics, and the query-cost scaling
// study. Every runner emits a CSV report embedding its full configuration
// and seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "offerset/config.hpp"
#include "offerset/geometry.hpp"
#include "offerset/lss.hpp"
#include "offerset/optimize.hpp"
#include "offerset/report.hpp"

namespace offerset {

enum class BaselineKind { kMean, kLast };

struct BaselineResult {
  OfferSet offer;
  bool mean_fallback = false;  // mixture mean had zero norm; first type used
};

// The k nearest items to a single query point: the normalized mean of the
// mixture types (kMean) or the final type (kLast). Exact linear scan when
// `ann` is null, otherwise the k nearest among the index's candidates.
BaselineResult baseline_recommend(BaselineKind kind, const UserMixture& mixture, std::size_t k,
                                  const ItemUniverse& universe, const ChoiceModel& model,
                                  const LssIndex* ann = nullptr);

struct Figure2Row {
  double mid_distance = 0.0;
  double target_p = 0.0;
  double lower_bound = 0.0;
  double empirical = 0.0;
  double standard_error = 0.0;
  std::size_t bin_size = 0;
};

struct Figure2Outcome {
  CsvReport report;
  std::vector<Figure2Row> rows;
  double measured_budget_exponent = 0.0;
};

// Builds the sampling index `replications` times over distance-uniform
// data and reports per-bin empirical inclusion against the decay target.
// The index is planned against min(inflation * p, 1), so the guaranteed
// curve is (inflation / 2) * p.
Figure2Outcome run_figure2(const ExperimentConfig& cfg);

struct BenchmarkRow {
  double sigma = 0.0;
  double w = 0.0;
  double avg_lss = 0.0;
  double avg_mean = 0.0;
  double avg_last = 0.0;
  double win_lss = 0.0;
  double win_mean = 0.0;
  double win_last = 0.0;
};

struct BenchmarkOutcome {
  CsvReport report;
  std::vector<BenchmarkRow> rows;
};

// Clustered universe, users modeled as mixtures of viewed items; compares
// the sampling pipeline against the mean/last heuristics on true expected
// conversion for each (sigma, w) grid entry.
BenchmarkOutcome run_benchmark(const ExperimentConfig& cfg);

struct ScalingRow {
  std::uint64_t n = 0;
  double w = 0.0;
  double mean_candidates = 0.0;
  double mean_query_seconds = 0.0;
};

struct ScalingOutcome {
  CsvReport report;
  std::vector<ScalingRow> rows;
  double candidate_exponent = 0.0;
  double time_exponent = 0.0;
};

// Query cost across the n grid with power-law fits of mean candidate count
// and mean query time. Timing runs serially. With scale_w on, the
// no-choice weight grows as (n / n_grid[0])^{1 - beta} so the singleton
// reward mass stays at n^beta across the grid.
ScalingOutcome run_scaling(const ExperimentConfig& cfg);

std::string gnuplot_script_figure2(const std::string& csv_path);
std::string gnuplot_script_scaling(const std::string& csv_path);

}  // namespace offerset
