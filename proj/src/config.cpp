#include "offerset/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "offerset/errors.hpp"
#include "offerset/report.hpp"

namespace offerset {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct ParsedLine {
  std::string section;
  std::string key;
  std::string value;
  std::size_t lineno;
};

std::vector<ParsedLine> parse_ini(const std::string& text) {
  std::vector<ParsedLine> lines;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto comment = raw.find_first_of("#;");
    if (comment != std::string::npos) raw = raw.substr(0, comment);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    ParsedLine pl;
    pl.section = section;
    pl.key = trim(line.substr(0, eq));
    pl.value = trim(line.substr(eq + 1));
    pl.lineno = lineno;
    if (pl.key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    lines.push_back(std::move(pl));
  }
  return lines;
}

double parse_double(const ParsedLine& pl) {
  try {
    std::size_t pos = 0;
    double v = std::stod(pl.value, &pos);
    if (pos != pl.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(pl.lineno) + ": bad number for " + pl.key);
  }
}

std::uint64_t parse_u64(const ParsedLine& pl) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(pl.value, &pos);
    if (pos != pl.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(pl.lineno) + ": bad integer for " + pl.key);
  }
}

bool parse_bool(const ParsedLine& pl) {
  if (pl.value == "true" || pl.value == "on" || pl.value == "1") return true;
  if (pl.value == "false" || pl.value == "off" || pl.value == "0") return false;
  throw ConfigError("line " + std::to_string(pl.lineno) + ": bad boolean for " + pl.key);
}

std::vector<std::pair<double, double>> parse_grid(const ParsedLine& pl) {
  std::vector<std::pair<double, double>> grid;
  std::stringstream ss(pl.value);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw ConfigError("line " + std::to_string(pl.lineno) +
                        ": grid entries take the form sigma:w");
    try {
      grid.emplace_back(std::stod(entry.substr(0, colon)), std::stod(entry.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(pl.lineno) + ": bad grid entry '" + entry + "'");
    }
  }
  if (grid.empty()) throw ConfigError("line " + std::to_string(pl.lineno) + ": empty grid");
  return grid;
}

std::vector<std::uint64_t> parse_u64_list(const ParsedLine& pl) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(pl.value);
  std::string entry;
  while (std::getline(ss, entry, ',')) {
    entry = trim(entry);
    try {
      values.push_back(std::stoull(entry));
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(pl.lineno) + ": bad list entry '" + entry + "'");
    }
  }
  if (values.empty()) throw ConfigError("line " + std::to_string(pl.lineno) + ": empty list");
  return values;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  for (const auto& pl : parse_ini(text)) {
    auto unknown = [&pl]() -> ConfigError {
      return ConfigError("line " + std::to_string(pl.lineno) + ": unknown key [" + pl.section +
                         "] " + pl.key);
    };
    if (pl.section == "experiment") {
      if (pl.key == "kind") cfg.kind = pl.value;
      else if (pl.key == "seed") cfg.seed = parse_u64(pl);
      else if (pl.key == "replications") cfg.replications = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "bin_items") cfg.bin_items = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "users") cfg.users = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "grid") cfg.sigma_w_grid = parse_grid(pl);
      else if (pl.key == "n_grid") cfg.n_grid = parse_u64_list(pl);
      else if (pl.key == "builds_per_n") cfg.builds_per_n = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "queries_per_build") cfg.queries_per_build = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "scale_w") cfg.scale_w = parse_bool(pl);
      else throw unknown();
    } else if (pl.section == "data") {
      if (pl.key == "n") cfg.n = parse_u64(pl);
      else if (pl.key == "d") cfg.d = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "law") cfg.law = pl.value;
      else if (pl.key == "clusters") cfg.clusters = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "spread") cfg.spread = parse_double(pl);
      else if (pl.key == "mixture_size") cfg.mixture_size = static_cast<std::uint32_t>(parse_u64(pl));
      else throw unknown();
    } else if (pl.section == "model") {
      if (pl.key == "sigma") cfg.sigma = parse_double(pl);
      else if (pl.key == "w") cfg.w = parse_double(pl);
      else if (pl.key == "theta") cfg.theta = parse_double(pl);
      else throw unknown();
    } else if (pl.section == "plan") {
      if (pl.key == "beta") cfg.beta = parse_double(pl);
      else if (pl.key == "c") cfg.c = parse_double(pl);
      else if (pl.key == "delta") cfg.delta = (pl.value == "auto") ? 0.0 : parse_double(pl);
      else if (pl.key == "r_variant") cfg.r_variant = pl.value;
      else if (pl.key == "inflation") cfg.inflation = parse_double(pl);
      else if (pl.key == "post_filter") cfg.post_filter = parse_bool(pl);
      else throw unknown();
    } else if (pl.section == "prune") {
      if (pl.key == "k") cfg.k = static_cast<std::uint32_t>(parse_u64(pl));
      else if (pl.key == "epsilon1") cfg.epsilon1 = parse_double(pl);
      else if (pl.key == "epsilon2") cfg.epsilon2 = parse_double(pl);
      else if (pl.key == "s_override") cfg.s_override = parse_u64(pl);
      else throw unknown();
    } else {
      throw ConfigError("line " + std::to_string(pl.lineno) + ": unknown section [" +
                        pl.section + "]");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (kind != "figure2" && kind != "benchmark" && kind != "scaling")
    fail("kind must be figure2, benchmark, or scaling");
  if (replications < 1) fail("replications must be at least 1");
  if (bin_items < 1) fail("bin_items must be at least 1");
  if (users < 1) fail("users must be at least 1");
  if (builds_per_n < 1) fail("builds_per_n must be at least 1");
  if (queries_per_build < 1) fail("queries_per_build must be at least 1");
  if (n_grid.empty()) fail("n_grid cannot be empty");
  if (d < 2) fail("d must be at least 2");
  if (law != "distance-uniform" && law != "cluster-mixture")
    fail("law must be distance-uniform or cluster-mixture");
  if (clusters < 1) fail("clusters must be at least 1");
  if (law == "cluster-mixture" && clusters > d) fail("clusters cannot exceed d");
  if (!(spread >= 0.0)) fail("spread must be nonnegative");
  if (mixture_size < 1) fail("mixture_size must be at least 1");
  for (auto [s, ww] : sigma_w_grid) {
    if (!(s >= 2e-3)) fail("grid sigma below supported minimum 0.002");
    if (!(ww >= 0.0)) fail("grid w must be nonnegative");
  }
  if (!(sigma >= 2e-3)) fail("sigma below supported minimum 0.002");
  if (!(w >= 0.0)) fail("w must be nonnegative");
  if (!(theta > 0.0 && theta <= 2.0)) fail("theta must lie in (0, 2]");
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
  if (!(c > 1.0)) fail("c must exceed 1");
  if (delta != 0.0 && !(delta > 0.0 && delta < 1.0)) fail("delta must be auto or in (0, 1)");
  if (r_variant != "definition" && r_variant != "table")
    fail("r_variant must be definition or table");
  if (!(inflation > 0.0)) fail("inflation must be positive");
  if (k < 1) fail("k must be at least 1");
  if (!(epsilon1 > 0.0 && epsilon1 <= 1.0)) fail("epsilon1 must lie in (0, 1]");
  if (!(epsilon2 > 0.0 && epsilon2 <= 1.0)) fail("epsilon2 must lie in (0, 1]");
}

LevelCountRule ExperimentConfig::level_rule() const {
  return r_variant == "table" ? LevelCountRule::kTableCeil : LevelCountRule::kBudgetFloor;
}

void ExperimentConfig::echo(CsvReport& report) const {
  report.set_meta("kind", kind);
  report.set_meta("seed", seed);
  report.set_meta("replications", std::uint64_t{replications});
  report.set_meta("bin_items", std::uint64_t{bin_items});
  report.set_meta("users", std::uint64_t{users});
  {
    std::string grid;
    for (auto [s, ww] : sigma_w_grid) {
      if (!grid.empty()) grid += ",";
      grid += format_double(s) + ":" + format_double(ww);
    }
    report.set_meta("grid", grid);
  }
  {
    std::string gridn;
    for (auto v : n_grid) {
      if (!gridn.empty()) gridn += ",";
      gridn += std::to_string(v);
    }
    report.set_meta("n_grid", gridn);
  }
  report.set_meta("builds_per_n", std::uint64_t{builds_per_n});
  report.set_meta("queries_per_build", std::uint64_t{queries_per_build});
  report.set_meta("scale_w", scale_w ? "true" : "false");
  report.set_meta("n", n);
  report.set_meta("d", std::uint64_t{d});
  report.set_meta("law", law);
  report.set_meta("clusters", std::uint64_t{clusters});
  report.set_meta("spread", spread);
  report.set_meta("mixture_size", std::uint64_t{mixture_size});
  report.set_meta("sigma", sigma);
  report.set_meta("w", w);
  report.set_meta("theta", theta);
  report.set_meta("beta", beta);
  report.set_meta("c", c);
  report.set_meta("delta", resolved_delta());
  report.set_meta("r_variant", r_variant);
  report.set_meta("inflation", inflation);
  report.set_meta("post_filter", post_filter ? "true" : "false");
  report.set_meta("k", std::uint64_t{k});
  report.set_meta("epsilon1", epsilon1);
  report.set_meta("epsilon2", epsilon2);
  report.set_meta("s_override", s_override);
}

}  // namespace offerset
