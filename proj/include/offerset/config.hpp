// Plain-text experiment configuration.
//
// Grammar: `[section]` headers, `key = value` lines, `#` or `;` comments,
// blank lines ignored. Unknown sections or keys are rejected. Every key
// has a default matching the sampling-curve experiment setup; see the
// README for the full key table.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "offerset/lss.hpp"

namespace offerset {

class CsvReport;

struct ExperimentConfig {
  // [experiment]
  std::string kind = "figure2";  // figure2 | benchmark | scaling
  std::uint64_t seed = 42;
  std::uint32_t replications = 20;
  std::uint32_t bin_items = 250;
  std::uint32_t users = 500;
  // sigma:w pairs evaluated by the benchmark runner
  std::vector<std::pair<double, double>> sigma_w_grid = {{0.01, 2.75}, {0.1, 4.0}, {1.0, 500.0}};
  std::vector<std::uint64_t> n_grid = {8192, 32768, 131072};
  std::uint32_t builds_per_n = 5;
  std::uint32_t queries_per_build = 200;
  bool scale_w = true;  // scaling runs: w grows as (n / n_grid[0])^{1-beta}

  // [data]
  std::uint64_t n = 50000;
  std::uint32_t d = 50;
  std::string law = "distance-uniform";  // distance-uniform | cluster-mixture
  std::uint32_t clusters = 10;
  double spread = 0.02;
  std::uint32_t mixture_size = 10;

  // [model]
  double sigma = 1.0;
  double w = 10.0;
  double theta = 1.4142135623730951;

  // [plan]
  double beta = 0.5;
  double c = 1.3;
  double delta = 0.0;  // 0 = auto (1/c, the hyperplane family's exponent)
  std::string r_variant = "definition";  // definition | table
  double inflation = 1.9;
  bool post_filter = false;

  // [prune]
  std::uint32_t k = 10;
  double epsilon1 = 0.2;
  double epsilon2 = 0.05;
  std::uint64_t s_override = 40;  // 0 = use the guarantee bound

  static ExperimentConfig from_string(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  void validate() const;
  double resolved_delta() const { return delta > 0.0 ? delta : 1.0 / c; }
  LevelCountRule level_rule() const;
  TruncatedMnlParams model_params() const { return {sigma, w, theta}; }

  // Writes every key into a report header so any number in the report can
  // be regenerated from the report alone.
  void echo(CsvReport& report) const;
};

}  // namespace offerset
