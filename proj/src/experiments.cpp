#include "offerset/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "offerset/parallel.hpp"
#include "offerset/rng.hpp"
#include "offerset/synthetic.hpp"

namespace offerset {

namespace {

// Least-squares slope of ln(y) against ln(x).
double power_law_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::max(y[i], 1e-300));
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

BaselineResult baseline_recommend(BaselineKind kind, const UserMixture& mixture, std::size_t k,
                                  const ItemUniverse& universe, const ChoiceModel& model,
                                  const LssIndex* ann) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (mixture.dim() != universe.dim())
    throw std::invalid_argument("mixture/universe dimension mismatch");

  BaselineResult result;
  std::vector<double> point(mixture.dim(), 0.0);
  if (kind == BaselineKind::kLast) {
    auto last = mixture.type(mixture.size() - 1);
    point.assign(last.begin(), last.end());
  } else {
    for (std::size_t t = 0; t < mixture.size(); ++t) {
      auto type = mixture.type(t);
      for (std::size_t j = 0; j < point.size(); ++j) point[j] += type[j];
    }
    double sq = 0.0;
    for (double x : point) sq += x * x;
    if (sq < 1e-18) {
      // Antipodal types cancel; fall back to the first type and flag it.
      auto first = mixture.type(0);
      point.assign(first.begin(), first.end());
      result.mean_fallback = true;
    } else {
      double inv = 1.0 / std::sqrt(sq);
      for (double& x : point) x *= inv;
    }
  }

  std::vector<std::pair<double, std::uint64_t>> scored;
  if (ann != nullptr) {
    for (std::uint64_t id : ann->query(point))
      scored.emplace_back(distance_from_inner(dot(universe.embedding_of(id), point)), id);
  } else {
    scored.reserve(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i)
      scored.emplace_back(distance_from_inner(dot(universe.embedding(i), point)),
                          universe.id_at(i));
  }
  std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end());
  result.offer.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) result.offer.items.push_back(scored[i].second);
  std::sort(result.offer.items.begin(), result.offer.items.end());
  result.offer.value = mixture_objective(universe, result.offer.items, mixture, model);
  return result;
}

Figure2Outcome run_figure2(const ExperimentConfig& cfg) {
  auto data = gen_distance_uniform(cfg.n, cfg.d, cfg.seed);
  TruncatedMnlParams params = cfg.model_params();
  DecayFunction p = decay_from_truncated_mnl(params);
  DecayFunction planned = DecayFunction::scaled(p, cfg.inflation);
  LevelPlan plan = plan_levels(planned, cfg.n, cfg.beta, cfg.c, cfg.resolved_delta(),
                               cfg.level_rule());

  std::size_t n = data.items.size();
  std::vector<double> distances(n);
  for (std::size_t i = 0; i < n; ++i)
    distances[i] = distance_from_inner(dot(data.items.embedding(i), data.query.span()));

  std::size_t reps = cfg.replications;
  std::vector<std::vector<std::uint8_t>> included(reps, std::vector<std::uint8_t>(n, 0));
  parallel_for(reps, [&](std::size_t rep) {
    LssIndex index = LssIndex::build(data.items, plan,
                                     mix_seed(cfg.seed, streams::kReplication, rep));
    index.set_distance_filter(cfg.post_filter);
    for (std::uint64_t id : index.query(data.query))
      included[rep][*data.items.index_of(id)] = 1;
  });

  std::vector<std::uint32_t> counts(n, 0);
  for (std::size_t rep = 0; rep < reps; ++rep)
    for (std::size_t i = 0; i < n; ++i) counts[i] += included[rep][i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (distances[a] != distances[b]) return distances[a] < distances[b];
    return a < b;
  });

  Figure2Outcome outcome;
  double target_factor = cfg.inflation / 2.0;
  for (std::size_t start = 0; start < n; start += cfg.bin_items) {
    std::size_t end = std::min(n, start + cfg.bin_items);
    Figure2Row row;
    row.bin_size = end - start;
    double dist_sum = 0.0;
    std::uint64_t hits = 0;
    for (std::size_t j = start; j < end; ++j) {
      dist_sum += distances[order[j]];
      hits += counts[order[j]];
    }
    row.mid_distance = dist_sum / static_cast<double>(row.bin_size);
    row.target_p = p(row.mid_distance);
    row.lower_bound = std::min(cfg.inflation * row.target_p, 1.0) / 2.0;
    double trials = static_cast<double>(row.bin_size) * static_cast<double>(reps);
    row.empirical = static_cast<double>(hits) / trials;
    row.standard_error = std::sqrt(row.empirical * (1.0 - row.empirical) / trials);
    outcome.rows.push_back(row);
  }

  double mass = 0.0;
  for (double d : distances) mass += p(d);
  outcome.measured_budget_exponent =
      (mass > 0.0 && n > 1) ? std::log(mass) / std::log(static_cast<double>(n)) : 0.0;

  cfg.echo(outcome.report);
  outcome.report.set_meta("plan", plan.summary());
  outcome.report.set_meta("guarantee_factor", target_factor);
  outcome.report.set_meta("budget_beta_measured", outcome.measured_budget_exponent);
  outcome.report.set_columns(
      {"mid_distance", "target_p", "lower_bound", "empirical", "standard_error", "bin_size"});
  for (const auto& row : outcome.rows) {
    outcome.report.add_row({format_double(row.mid_distance), format_double(row.target_p),
                            format_double(row.lower_bound), format_double(row.empirical),
                            format_double(row.standard_error), std::to_string(row.bin_size)});
  }
  return outcome;
}

BenchmarkOutcome run_benchmark(const ExperimentConfig& cfg) {
  auto data = gen_cluster_mixture(cfg.n, cfg.d, cfg.clusters, cfg.spread, cfg.seed);

  std::vector<UserMixture> mixtures;
  mixtures.reserve(cfg.users);
  for (std::size_t t = 0; t < cfg.users; ++t) {
    std::mt19937_64 rng(mix_seed(cfg.seed, streams::kUser, t));
    mixtures.push_back(sample_user_from_items(data.items, cfg.mixture_size, rng));
  }

  BenchmarkOutcome outcome;
  for (std::size_t row_idx = 0; row_idx < cfg.sigma_w_grid.size(); ++row_idx) {
    auto [sigma, w] = cfg.sigma_w_grid[row_idx];
    TruncatedMnlParams params{sigma, w, cfg.theta};
    TruncatedMnl model(params);
    DecayFunction p = decay_from_truncated_mnl(params);
    LevelPlan plan =
        plan_levels(p, cfg.n, cfg.beta, cfg.c, cfg.resolved_delta(), cfg.level_rule());

    PruneConfig prune_cfg;
    prune_cfg.epsilon1 = cfg.epsilon1;
    prune_cfg.epsilon2 = cfg.epsilon2;
    if (cfg.s_override > 0) prune_cfg.s_override = cfg.s_override;
    std::size_t s = cfg.s_override > 0
                        ? cfg.s_override
                        : required_samples(cfg.k, prune_cfg.sampling_floor, cfg.epsilon1,
                                           cfg.epsilon2);
    auto ensemble =
        build_ensemble(data.items, plan, s, mix_seed(cfg.seed, streams::kEnsemble, row_idx));

    std::vector<double> v_lss(cfg.users), v_mean(cfg.users), v_last(cfg.users);
    parallel_for(cfg.users, [&](std::size_t t) {
      std::mt19937_64 rng(mix_seed(mix_seed(cfg.seed, streams::kPrune, row_idx), t));
      auto rec = recommend(ensemble, mixtures[t], cfg.k, prune_cfg, model, data.items, rng);
      v_lss[t] = rec.offer.value;
      v_mean[t] =
          baseline_recommend(BaselineKind::kMean, mixtures[t], cfg.k, data.items, model)
              .offer.value;
      v_last[t] =
          baseline_recommend(BaselineKind::kLast, mixtures[t], cfg.k, data.items, model)
              .offer.value;
    });

    BenchmarkRow row;
    row.sigma = sigma;
    row.w = w;
    for (std::size_t t = 0; t < cfg.users; ++t) {
      row.avg_lss += v_lss[t];
      row.avg_mean += v_mean[t];
      row.avg_last += v_last[t];
      double best = std::max({v_lss[t], v_mean[t], v_last[t]});
      bool lss_best = v_lss[t] >= best - 1e-12;
      bool mean_best = v_mean[t] >= best - 1e-12;
      bool last_best = v_last[t] >= best - 1e-12;
      double share = 1.0 / static_cast<double>(lss_best + mean_best + last_best);
      if (lss_best) row.win_lss += share;
      if (mean_best) row.win_mean += share;
      if (last_best) row.win_last += share;
    }
    double users = static_cast<double>(cfg.users);
    row.avg_lss /= users;
    row.avg_mean /= users;
    row.avg_last /= users;
    row.win_lss /= users;
    row.win_mean /= users;
    row.win_last /= users;
    outcome.rows.push_back(row);
  }

  cfg.echo(outcome.report);
  outcome.report.set_columns({"sigma", "w", "avg_conversion_lss", "avg_conversion_mean",
                              "avg_conversion_last", "win_lss", "win_mean", "win_last"});
  for (const auto& row : outcome.rows) {
    outcome.report.add_row({format_double(row.sigma), format_double(row.w),
                            format_double(row.avg_lss), format_double(row.avg_mean),
                            format_double(row.avg_last), format_double(row.win_lss),
                            format_double(row.win_mean), format_double(row.win_last)});
  }
  return outcome;
}

ScalingOutcome run_scaling(const ExperimentConfig& cfg) {
  ScalingOutcome outcome;
  double n0 = static_cast<double>(cfg.n_grid.front());

  std::vector<double> ns, cands, times;
  for (std::uint64_t n : cfg.n_grid) {
    double w = cfg.scale_w
                   ? cfg.w * std::pow(static_cast<double>(n) / n0, 1.0 - cfg.beta)
                   : cfg.w;
    TruncatedMnlParams params{cfg.sigma, w, cfg.theta};
    DecayFunction p = decay_from_truncated_mnl(params);
    LevelPlan plan = plan_levels(p, n, cfg.beta, cfg.c, cfg.resolved_delta(), cfg.level_rule());

    double cand_sum = 0.0;
    double time_sum = 0.0;
    for (std::uint32_t b = 0; b < cfg.builds_per_n; ++b) {
      auto data = gen_distance_uniform(n, cfg.d, mix_seed(cfg.seed, n, b));
      LssIndex index =
          LssIndex::build(data.items, plan, mix_seed(mix_seed(cfg.seed, streams::kLevel, n), b));
      index.set_distance_filter(cfg.post_filter);

      cand_sum += static_cast<double>(index.query(data.query).size());
      std::size_t sink = 0;
      auto t0 = std::chrono::steady_clock::now();
      for (std::uint32_t q = 0; q < cfg.queries_per_build; ++q)
        sink += index.query(data.query).size();
      auto t1 = std::chrono::steady_clock::now();
      if (sink == std::size_t(-1)) throw std::logic_error("unreachable");
      time_sum += std::chrono::duration<double>(t1 - t0).count() /
                  static_cast<double>(cfg.queries_per_build);
    }

    ScalingRow row;
    row.n = n;
    row.w = w;
    row.mean_candidates = cand_sum / static_cast<double>(cfg.builds_per_n);
    row.mean_query_seconds = time_sum / static_cast<double>(cfg.builds_per_n);
    outcome.rows.push_back(row);
    ns.push_back(static_cast<double>(n));
    cands.push_back(row.mean_candidates);
    times.push_back(row.mean_query_seconds);
  }

  if (ns.size() >= 2) {
    outcome.candidate_exponent = power_law_exponent(ns, cands);
    outcome.time_exponent = power_law_exponent(ns, times);
  }

  cfg.echo(outcome.report);
  outcome.report.set_meta("candidate_exponent", outcome.candidate_exponent);
  outcome.report.set_meta("time_exponent", outcome.time_exponent);
  outcome.report.set_columns({"n", "w", "mean_candidates", "mean_query_seconds"});
  for (const auto& row : outcome.rows) {
    outcome.report.add_row({std::to_string(row.n), format_double(row.w),
                            format_double(row.mean_candidates),
                            format_double(row.mean_query_seconds)});
  }
  return outcome;
}

std::string gnuplot_script_figure2(const std::string& csv_path) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set xlabel 'distance'\n";
  s += "set ylabel 'sampling probability'\n";
  s += "set key top right\n";
  s += "plot '" + csv_path + "' using 1:2 with lines title 'target p', \\\n";
  s += "     '" + csv_path + "' using 1:3 with lines dashtype 2 title 'lower bound', \\\n";
  s += "     '" + csv_path + "' using 1:4 with points pointtype 7 pointsize 0.4 title 'empirical'\n";
  return s;
}

std::string gnuplot_script_scaling(const std::string& csv_path) {
  std::string s;
  s += "set datafile separator ','\n";
  s += "set logscale xy\n";
  s += "set xlabel 'items'\n";
  s += "set key top left\n";
  s += "plot '" + csv_path + "' using 1:3 with linespoints title 'candidates', \\\n";
  s += "     '" + csv_path + "' using 1:($4*1e6) with linespoints title 'query time (us)'\n";
  return s;
}

}  // namespace offerset
