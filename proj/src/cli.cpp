#include "hdben/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdben/io.hpp"

namespace hdben {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create directory: " + dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

void write_meta(const RunConfig& cfg, const std::string& command, double wall_seconds,
                json extra) {
  json meta;
  meta["command"] = command;
  meta["seed"] = cfg.seed();
  meta["wall_seconds"] = wall_seconds;
  meta["config"] = to_json(cfg);
  for (auto& [k, v] : extra.items()) meta[k] = v;
  write_json_file(join_path(cfg.output_dir, "meta.json"), meta);
}

// summary.csv rows for one block; coordinates are 1-based to match the
// x1..xd input naming.
void append_block_rows(CsvTable& table, json& rows, const std::string& block,
                       const BlockSummary& s, const IndexSet& selected) {
  std::vector<bool> sel(static_cast<size_t>(s.mean.size()), false);
  for (int j : selected) sel[static_cast<size_t>(j)] = true;
  for (Eigen::Index j = 0; j < s.mean.size(); ++j) {
    table.rows.push_back({std::to_string(j + 1), block, format_double(s.mean[j]),
                          format_double(s.sd[j]), format_double(s.q_lo[j]),
                          format_double(s.q_hi[j]), format_double(s.rhat[j]),
                          format_double(s.ess[j]),
                          sel[static_cast<size_t>(j)] ? "1" : "0"});
    rows.push_back({{"coordinate", j + 1},
                    {"block", block},
                    {"mean", s.mean[j]},
                    {"sd", s.sd[j]},
                    {"q2.5", s.q_lo[j]},
                    {"q97.5", s.q_hi[j]},
                    {"rhat", s.rhat[j]},
                    {"ess", s.ess[j]},
                    {"selected", static_cast<bool>(sel[static_cast<size_t>(j)])}});
  }
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
  const Eigen::Index d = draws.chains.front().beta.cols();
  CsvTable table;
  table.header = {"chain", "iteration"};
  for (Eigen::Index j = 0; j < d; ++j) table.header.push_back("beta" + std::to_string(j + 1));
  for (Eigen::Index j = 0; j < d; ++j) table.header.push_back("gamma" + std::to_string(j + 1));
  table.header.insert(table.header.end(), {"lambda1_beta_sq", "lambda1_gamma_sq",
                                           "lambda2_beta", "lambda2_gamma"});
  for (int c = 0; c < draws.num_chains(); ++c) {
    const ChainDraws& ch = draws.chains[static_cast<size_t>(c)];
    for (Eigen::Index r = 0; r < ch.beta.rows(); ++r) {
      std::vector<std::string> row = {std::to_string(c), std::to_string(r)};
      for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_double(ch.beta(r, j)));
      for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_double(ch.gamma(r, j)));
      for (Eigen::Index k = 0; k < 4; ++k) row.push_back(format_double(ch.scalars(r, k)));
      table.rows.push_back(std::move(row));
    }
  }
  write_csv(path, table);
}

const std::vector<std::string> kResultsHeader = {"n",   "d",        "s_beta", "s_gamma",
                                                 "method", "replicate", "l2_error", "tpr",
                                                 "fpr", "exact",    "seconds"};

const std::vector<std::string> kResultsSummaryHeader = {
    "n",        "d",        "s_beta",   "s_gamma",      "method",
    "mean_l2_error", "sd_l2_error", "mean_tpr", "mean_fpr", "exact_rate",
    "mean_seconds",  "ok_count",    "fail_count"};

// Writes results.csv (successful replicates) and results_summary.csv
// (per-cell aggregates including failure counts). Returns true when some
// method failed on every replicate of some scenario.
bool write_grid_outputs(const RunConfig& cfg, const std::vector<ScenarioResult>& results) {
  CsvTable raw;
  raw.header = kResultsHeader;
  CsvTable agg;
  agg.header = kResultsSummaryHeader;
  json raw_rows = json::array();
  json agg_rows = json::array();
  bool any_method_dead = false;

  for (const auto& res : results) {
    const auto& sp = res.spec;
    const std::vector<std::string> cell = {std::to_string(sp.n), std::to_string(sp.d),
                                           std::to_string(sp.s_beta), std::to_string(sp.s_gamma)};
    for (const auto& rec : res.records) {
      if (rec.failed) continue;
      raw.rows.push_back({cell[0], cell[1], cell[2], cell[3], to_string(rec.method),
                          std::to_string(rec.replicate), format_double(rec.l2err),
                          format_double(rec.beta_support.tpr), format_double(rec.beta_support.fpr),
                          rec.beta_support.exact ? "1" : "0", format_double(rec.seconds)});
      raw_rows.push_back({{"n", sp.n},
                          {"d", sp.d},
                          {"s_beta", sp.s_beta},
                          {"s_gamma", sp.s_gamma},
                          {"method", to_string(rec.method)},
                          {"replicate", rec.replicate},
                          {"l2_error", rec.l2err},
                          {"tpr", rec.beta_support.tpr},
                          {"fpr", rec.beta_support.fpr},
                          {"exact", rec.beta_support.exact},
                          {"seconds", rec.seconds}});
    }
    for (const auto& [m, a] : res.per_method) {
      if (a.ok_count == 0) any_method_dead = true;
      agg.rows.push_back({cell[0], cell[1], cell[2], cell[3], to_string(m),
                          format_double(a.mean_l2err), format_double(a.sd_l2err),
                          format_double(a.mean_tpr), format_double(a.mean_fpr),
                          format_double(a.exact_rate), format_double(a.mean_seconds),
                          std::to_string(a.ok_count), std::to_string(a.fail_count)});
      agg_rows.push_back({{"n", sp.n},
                          {"d", sp.d},
                          {"s_beta", sp.s_beta},
                          {"s_gamma", sp.s_gamma},
                          {"method", to_string(m)},
                          {"mean_l2_error", a.mean_l2err},
                          {"sd_l2_error", a.sd_l2err},
                          {"mean_tpr", a.mean_tpr},
                          {"mean_fpr", a.mean_fpr},
                          {"exact_rate", a.exact_rate},
                          {"mean_seconds", a.mean_seconds},
                          {"ok_count", a.ok_count},
                          {"fail_count", a.fail_count}});
    }
  }

  if (cfg.format == OutputFormat::csv) {
    write_csv(join_path(cfg.output_dir, "results.csv"), raw);
    write_csv(join_path(cfg.output_dir, "results_summary.csv"), agg);
  } else {
    write_json_file(join_path(cfg.output_dir, "results.json"), raw_rows);
    write_json_file(join_path(cfg.output_dir, "results_summary.json"), agg_rows);
  }
  return any_method_dead;
}

std::string format_cell(const MethodAggregate& a) {
  if (a.ok_count == 0) return "failed";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f ± %.4f", a.mean_l2err, a.sd_l2err);
  return buf;
}

const MethodAggregate* find_aggregate(const std::vector<ScenarioResult>& results, Method m,
                                      int n, int d, int s_beta) {
  for (const auto& res : results) {
    if (res.spec.n != n || res.spec.d != d || res.spec.s_beta != s_beta) continue;
    for (const auto& [method, agg] : res.per_method) {
      if (method == m) return &agg;
    }
  }
  return nullptr;
}

}  // namespace

void apply_profile(RunConfig& cfg, const std::string& profile) {
  int iterations, burn_in, chains, replicates;
  if (profile == "desk") {
    iterations = 2500;
    burn_in = 500;
    chains = 2;
    replicates = 5;
  } else if (profile == "full") {
    iterations = 5000;
    burn_in = 1000;
    chains = 3;
    replicates = 20;
  } else {
    throw ConfigError("profile", "must be 'desk' or 'full'");
  }
  cfg.sampler.iterations = iterations;
  cfg.sampler.burn_in = burn_in;
  cfg.sampler.chains = chains;
  cfg.homo.iterations = iterations;
  cfg.homo.burn_in = burn_in;
  cfg.homo.chains = chains;
  cfg.replicates = replicates;
}

int cmd_fit(const RunConfig& cfg, const std::string& data_path) {
  const auto t0 = std::chrono::steady_clock::now();
  Dataset data;
  try {
    data = read_dataset_csv(data_path);
    cfg.hyp.validate();
    cfg.sampler.validate();
    ensure_output_dir(cfg.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  PosteriorDraws draws;
  FitSummary summary;
  try {
    draws = fit_hdben(data, cfg.hyp, cfg.sampler);
    summary = summarize(draws);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }

  CsvTable table;
  table.header = {"coordinate", "block", "mean", "sd", "q2.5", "q97.5", "rhat", "ess", "selected"};
  json rows = json::array();
  append_block_rows(table, rows, "beta", summary.beta, summary.support_beta);
  append_block_rows(table, rows, "gamma", summary.gamma, summary.support_gamma);
  if (cfg.format == OutputFormat::csv) {
    write_csv(join_path(cfg.output_dir, "summary.csv"), table);
  } else {
    write_json_file(join_path(cfg.output_dir, "summary.json"), rows);
  }
  if (cfg.save_draws) write_draws_csv(join_path(cfg.output_dir, "draws.csv"), draws);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_meta(cfg, "fit", wall, json{{"mh_acceptance", summary.mh_acceptance}});
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ScenarioResult> results;
  try {
    cfg.validate();
    ensure_output_dir(cfg.output_dir);
    results = run_grid({cfg.make_scenario()});
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }

  const bool dead = write_grid_outputs(cfg, results);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_meta(cfg, "simulate", wall, json::object());
  if (dead) {
    std::cerr << "error: at least one method failed on every replicate\n";
    return kExitExperiment;
  }
  return kExitOk;
}

std::vector<ScenarioSpec> table2_specs(const std::string& profile, const RunConfig& cfg) {
  std::vector<int> dims, sparsities;
  if (profile == "desk") {
    dims = {100, 250};
    sparsities = {10};
  } else if (profile == "full") {
    dims = {250, 500, 750, 1000};
    sparsities = {10, 50, 100};
  } else {
    throw ConfigError("profile", "must be 'desk' or 'full'");
  }

  std::vector<ScenarioSpec> specs;
  std::uint64_t cell = 100;
  for (int s : sparsities) {
    for (int d : dims) {
      ScenarioSpec sp = cfg.make_scenario();
      sp.n = 200;
      sp.d = d;
      sp.s_beta = s;
      sp.s_gamma = s;
      sp.seed = derive_seed(cfg.seed(), cell++);
      specs.push_back(std::move(sp));
    }
  }
  return specs;
}

std::vector<ScenarioSpec> table3_specs(const std::string& profile, const RunConfig& cfg) {
  std::vector<int> dims;
  if (profile == "desk") {
    dims = {100};
  } else if (profile == "full") {
    dims = {100, 500, 1000};
  } else {
    throw ConfigError("profile", "must be 'desk' or 'full'");
  }
  const std::vector<int> sizes = {50, 100, 150, 200};

  std::vector<ScenarioSpec> specs;
  std::uint64_t cell = 200;
  for (int d : dims) {
    for (int n : sizes) {
      ScenarioSpec sp = cfg.make_scenario();
      sp.n = n;
      sp.d = d;
      sp.s_beta = 10;
      sp.s_gamma = 10;
      sp.seed = derive_seed(cfg.seed(), cell++);
      specs.push_back(std::move(sp));
    }
  }
  return specs;
}

int cmd_reproduce(const std::string& table, const std::string& profile, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ScenarioSpec> specs;
  try {
    if (table != "table2" && table != "table3")
      throw ConfigError("table", "must be 'table2' or 'table3'");
    cfg.validate();
    ensure_output_dir(cfg.output_dir);
    specs = table == "table2" ? table2_specs(profile, cfg) : table3_specs(profile, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<ScenarioResult> results;
  try {
    results = run_grid(specs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }

  const bool dead = write_grid_outputs(cfg, results);

  // Pivot: rows are method x (s_beta or d), columns the swept dimension.
  CsvTable pivot;
  json pivot_rows = json::array();
  if (table == "table2") {
    std::vector<int> dims, sparsities;
    for (const auto& r : results) {
      if (std::find(dims.begin(), dims.end(), r.spec.d) == dims.end()) dims.push_back(r.spec.d);
      if (std::find(sparsities.begin(), sparsities.end(), r.spec.s_beta) == sparsities.end())
        sparsities.push_back(r.spec.s_beta);
    }
    pivot.header = {"model", "s_beta"};
    for (int d : dims) pivot.header.push_back("d=" + std::to_string(d));
    for (Method m : cfg.methods) {
      for (int s : sparsities) {
        std::vector<std::string> row = {to_string(m), std::to_string(s)};
        json jrow = {{"model", to_string(m)}, {"s_beta", s}};
        for (int d : dims) {
          const auto* a = find_aggregate(results, m, 200, d, s);
          row.push_back(a ? format_cell(*a) : "");
          jrow["d=" + std::to_string(d)] = a ? format_cell(*a) : "";
        }
        pivot.rows.push_back(std::move(row));
        pivot_rows.push_back(std::move(jrow));
      }
    }
  } else {
    std::vector<int> dims, sizes;
    for (const auto& r : results) {
      if (std::find(dims.begin(), dims.end(), r.spec.d) == dims.end()) dims.push_back(r.spec.d);
      if (std::find(sizes.begin(), sizes.end(), r.spec.n) == sizes.end()) sizes.push_back(r.spec.n);
    }
    pivot.header = {"model", "d"};
    for (int n : sizes) pivot.header.push_back("n=" + std::to_string(n));
    for (Method m : cfg.methods) {
      for (int d : dims) {
        std::vector<std::string> row = {to_string(m), std::to_string(d)};
        json jrow = {{"model", to_string(m)}, {"d", d}};
        for (int n : sizes) {
          const auto* a = find_aggregate(results, m, n, d, 10);
          row.push_back(a ? format_cell(*a) : "");
          jrow["n=" + std::to_string(n)] = a ? format_cell(*a) : "";
        }
        pivot.rows.push_back(std::move(row));
        pivot_rows.push_back(std::move(jrow));
      }
    }
  }
  if (cfg.format == OutputFormat::csv) {
    write_csv(join_path(cfg.output_dir, table + ".csv"), pivot);
  } else {
    write_json_file(join_path(cfg.output_dir, table + ".json"), pivot_rows);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_meta(cfg, "reproduce", wall, json{{"table", table}, {"profile", profile}});
  if (dead) {
    std::cerr << "error: at least one method failed on every replicate\n";
    return kExitExperiment;
  }
  return kExitOk;
}

}  // namespace hdben
