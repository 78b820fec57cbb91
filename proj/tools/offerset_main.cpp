// Command-line front end: synthetic data generation, index build/query,
// recommendation, and the three experiment runners.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "offerset/config.hpp"
#include "offerset/errors.hpp"
#include "offerset/experiments.hpp"
#include "offerset/lss.hpp"
#include "offerset/optimize.hpp"
#include "offerset/report.hpp"
#include "offerset/rng.hpp"
#include "offerset/synthetic.hpp"
#include "offerset/vector_io.hpp"

namespace {

using namespace offerset;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ExperimentConfig load_config(const CommonArgs& args) {
  ExperimentConfig cfg =
      args.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
  cmd->add_option("--config", args.config_path, "configuration file");
  cmd->add_option("--seed", args.seed, "seed override");
  args.out = default_out;
  cmd->add_option("--out", args.out, "output path");
}

int cmd_gen(const CommonArgs& args, const std::string& query_out) {
  ExperimentConfig cfg = load_config(args);
  if (cfg.law == "cluster-mixture") {
    auto data = gen_cluster_mixture(cfg.n, cfg.d, cfg.clusters, cfg.spread, cfg.seed);
    save_items_file(data.items, args.out);
    ItemUniverse centers(cfg.d);
    for (std::size_t i = 0; i < data.centers.size(); ++i)
      centers.add(i, data.centers[i]);
    save_items_file(centers, query_out);
    std::printf("wrote %zu items to %s, %zu cluster centers to %s\n", data.items.size(),
                args.out.c_str(), centers.size(), query_out.c_str());
  } else {
    auto data = gen_distance_uniform(cfg.n, cfg.d, cfg.seed);
    save_items_file(data.items, args.out);
    ItemUniverse query(cfg.d);
    query.add(0, data.query);
    save_items_file(query, query_out);
    std::printf("wrote %zu items to %s, query point to %s\n", data.items.size(),
                args.out.c_str(), query_out.c_str());
  }
  return 0;
}

int cmd_build_index(const CommonArgs& args, const std::string& data_path) {
  ExperimentConfig cfg = load_config(args);
  ItemUniverse items = load_items_file(data_path);
  DecayFunction p = decay_from_truncated_mnl(cfg.model_params());
  LevelPlan plan = plan_levels(p, items.size(), cfg.beta, cfg.c, cfg.resolved_delta(),
                               cfg.level_rule());
  LssIndex index = LssIndex::build(items, plan, cfg.seed);
  index.save(args.out);
  std::printf("built index over %zu items (%s), wrote %s\n", items.size(),
              plan.summary().c_str(), args.out.c_str());
  return 0;
}

int cmd_query(const CommonArgs& args, const std::string& index_path,
              const std::string& query_path, bool post_filter) {
  LssIndex index = LssIndex::load(index_path);
  index.set_distance_filter(post_filter);
  ItemUniverse queries = load_items_file(query_path);
  CsvReport report;
  report.set_meta("index", index_path);
  report.set_meta("index_seed", index.seed());
  report.set_columns({"query_id", "count", "items"});
  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto hits = index.query(queries.embedding(i));
    std::string joined;
    for (std::uint64_t id : hits) {
      if (!joined.empty()) joined += ';';
      joined += std::to_string(id);
    }
    report.add_row({std::to_string(queries.id_at(i)), std::to_string(hits.size()), joined});
  }
  report.save(args.out);
  std::printf("wrote %zu query results to %s\n", queries.size(), args.out.c_str());
  return 0;
}

int cmd_recommend(const CommonArgs& args, const std::string& data_path,
                  const std::string& mixture_path) {
  ExperimentConfig cfg = load_config(args);
  ItemUniverse items = load_items_file(data_path);
  UserMixture mixture = load_mixture_file(mixture_path);
  TruncatedMnl model(cfg.model_params());
  DecayFunction p = decay_from_truncated_mnl(cfg.model_params());
  LevelPlan plan = plan_levels(p, items.size(), cfg.beta, cfg.c, cfg.resolved_delta(),
                               cfg.level_rule());

  PruneConfig prune_cfg;
  prune_cfg.epsilon1 = cfg.epsilon1;
  prune_cfg.epsilon2 = cfg.epsilon2;
  if (cfg.s_override > 0) prune_cfg.s_override = cfg.s_override;
  std::size_t s = cfg.s_override > 0 ? cfg.s_override
                                     : required_samples(cfg.k, prune_cfg.sampling_floor,
                                                        cfg.epsilon1, cfg.epsilon2);
  auto ensemble = build_ensemble(items, plan, s, mix_seed(cfg.seed, streams::kEnsemble, 0));
  std::mt19937_64 rng(mix_seed(cfg.seed, streams::kPrune, 0));
  auto rec = recommend(ensemble, mixture, cfg.k, prune_cfg, model, items, rng);

  CsvReport report;
  cfg.echo(report);
  report.set_meta("guarantee_samples",
                  std::uint64_t{required_samples(cfg.k, prune_cfg.sampling_floor, cfg.epsilon1,
                                                 cfg.epsilon2)});
  report.set_meta("ensemble_size", std::uint64_t{rec.ensemble_size});
  report.set_columns({"items", "value", "candidates", "prune_seconds", "greedy_seconds"});
  std::string joined;
  for (std::uint64_t id : rec.offer.items) {
    if (!joined.empty()) joined += ';';
    joined += std::to_string(id);
  }
  report.add_row({joined, format_double(rec.offer.value), std::to_string(rec.candidate_count),
                  format_double(rec.prune_seconds), format_double(rec.greedy_seconds)});
  report.save(args.out);
  std::printf("offer set of %zu items, objective %.6f, %zu candidates; wrote %s\n",
              rec.offer.items.size(), rec.offer.value, rec.candidate_count, args.out.c_str());
  return 0;
}

void maybe_plot(bool plot, const std::string& out, const std::string& script) {
  if (!plot) return;
  std::string path = out + ".gp";
  std::ofstream f(path);
  f << script;
  std::printf("wrote plot script %s\n", path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-linear personalized offer-set optimization"};
  app.require_subcommand(1);

  CommonArgs gen_args, build_args, query_args, rec_args, fig_args, bench_args, scale_args;
  std::string gen_query_out = "query.osv";
  std::string data_path, mixture_path, index_path, query_path;
  bool query_filter = false;
  bool fig_plot = false, scale_plot = false;

  auto* gen = app.add_subcommand("gen", "generate synthetic vectors");
  add_common(gen, gen_args, "items.osv");
  gen->add_option("--query-out", gen_query_out, "query/centers output path");

  auto* build = app.add_subcommand("build-index", "build a sampling index");
  add_common(build, build_args, "index.lss");
  build->add_option("--data", data_path, "item vector file")->required();

  auto* query = app.add_subcommand("query", "query a persisted index");
  add_common(query, query_args, "query_results.csv");
  query->add_option("--index", index_path, "index file")->required();
  query->add_option("--query", query_path, "query vector file")->required();
  query->add_flag("--post-filter", query_filter, "drop candidates beyond each level radius");

  auto* rec = app.add_subcommand("recommend", "prune and greedy-optimize one user");
  add_common(rec, rec_args, "recommendation.csv");
  rec->add_option("--data", data_path, "item vector file")->required();
  rec->add_option("--mixture", mixture_path, "user type vector file")->required();

  auto* fig = app.add_subcommand("sample-probs", "empirical sampling probability curve");
  add_common(fig, fig_args, "sample_probs.csv");
  fig->add_flag("--plot", fig_plot, "emit a gnuplot script next to the CSV");

  auto* bench = app.add_subcommand("benchmark", "compare against mean/last heuristics");
  add_common(bench, bench_args, "benchmark.csv");

  auto* scale = app.add_subcommand("scaling", "query cost across universe sizes");
  add_common(scale, scale_args, "scaling.csv");
  scale->add_flag("--plot", scale_plot, "emit a gnuplot script next to the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_args, gen_query_out);
    if (build->parsed()) return cmd_build_index(build_args, data_path);
    if (query->parsed()) return cmd_query(query_args, index_path, query_path, query_filter);
    if (rec->parsed()) return cmd_recommend(rec_args, data_path, mixture_path);
    if (fig->parsed()) {
      auto outcome = run_figure2(load_config(fig_args));
      outcome.report.save(fig_args.out);
      maybe_plot(fig_plot, fig_args.out, gnuplot_script_figure2(fig_args.out));
      std::printf("wrote %zu bins to %s\n", outcome.rows.size(), fig_args.out.c_str());
      return 0;
    }
    if (bench->parsed()) {
      auto outcome = run_benchmark(load_config(bench_args));
      outcome.report.save(bench_args.out);
      std::printf("wrote %zu grid rows to %s\n", outcome.rows.size(), bench_args.out.c_str());
      return 0;
    }
    if (scale->parsed()) {
      auto outcome = run_scaling(load_config(scale_args));
      outcome.report.save(scale_args.out);
      maybe_plot(scale_plot, scale_args.out, gnuplot_script_scaling(scale_args.out));
      std::printf("candidate exponent %.3f, time exponent %.3f; wrote %s\n",
                  outcome.candidate_exponent, outcome.time_exponent, scale_args.out.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const GuardError& e) {
    std::fprintf(stderr, "guard violation: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
