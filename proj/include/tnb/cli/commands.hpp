#ifndef TNB_CLI_COMMANDS_HPP_
#define TNB_CLI_COMMANDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnb/cli/run_config.hpp"
#include "tnb/trial/run.hpp"

namespace tnb::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

inline constexpr const char* kResolvedConfigFile = "config.json";

struct RunOptions {
  fs::path config_path;
  std::vector<std::string> overrides;
  bool force = false;
  std::optional<fs::path> out;
};

namespace detail {

inline bool non_empty_dir(const fs::path& dir) { return fs::is_directory(dir) && !fs::is_empty(dir); }

inline std::string fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Left-aligned first column, right-aligned numbers, two spaces between columns.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? cells[c] + pad : pad + cells[c];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

// Prepares the run directory and writes the resolved configuration.
inline fs::path prepare_run_dir(const RunConfig& config, const std::optional<fs::path>& out, bool force) {
  const fs::path dir = out ? *out : fs::path(config.output_dir);
  if (non_empty_dir(dir)) {
    if (!force) throw ConfigError("run directory " + dir.string() + " is not empty (use --force to overwrite)");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  RunConfig echoed = config;
  echoed.output_dir = dir.string();
  write_json_file(dir / kResolvedConfigFile, config_to_json(echoed));
  return dir;
}

// Runs one trial into `dir`, converting failures into a marker file.
inline int execute_trial(const RunConfig& config, const fs::path& dir, std::ostream& out, std::ostream& err) {
  try {
    const trial::TrialRecord record = trial::run_trial(config.trial, dir, &err);
    out << dir.string() << ": " << record.metrics.policies.size() << " policies";
    if (envs::env_family(record.metrics.env) == envs::EnvFamily::four_way) {
      out << ", paths found " << record.metrics.paths_found << ", in order " << (record.metrics.in_order ? "yes" : "no");
    }
    out << ", successful policies " << record.metrics.successful_policies << "\n";
    return kExitOk;
  } catch (const trial::TrialAborted& e) {
    err << "error: " << e.what() << " (partial results in " << dir.string() << ")\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    write_text_file(dir / trial::kFailureMarker, std::string(e.what()) + "\n");
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace detail

inline int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig config;
  fs::path dir;
  try {
    config = load_run_config(options.config_path, options.overrides);
    dir = detail::prepare_run_dir(config, options.out, options.force);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return detail::execute_trial(config, dir, out, err);
}

// Re-evaluates a finished (or partial) run from its resolved config. Overrides
// apply on top of the stored config, e.g. trial.eval_episodes=5.
inline int cmd_eval(const fs::path& run_dir, const std::vector<std::string>& overrides, std::ostream& out,
                    std::ostream& err) {
  RunConfig config;
  try {
    config = load_run_config(run_dir / kResolvedConfigFile, overrides);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  try {
    if (!fs::exists(trial::policy_path(run_dir, 1))) {
      throw FormatError("no policy files in " + run_dir.string());
    }
    std::vector<bool> aborted;
    if (fs::exists(run_dir / trial::kMetricsFile)) {
      try {
        for (const auto& p : trial::metrics_from_json(read_json_file(run_dir / trial::kMetricsFile)).policies) {
          aborted.push_back(p.training_aborted);
        }
      } catch (const FormatError&) {
        aborted.clear();
      }
    }
    const trial::TrialMetrics metrics = trial::evaluate_trial(run_dir, config.trial, aborted);
    write_json_file(run_dir / trial::kMetricsFile, trial::metrics_to_json(metrics));
    out << run_dir.string() << ": re-evaluated " << metrics.policies.size() << " policies over "
        << metrics.eval_episodes << " episode(s)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// One row of a comparison: all trials of one method on one environment.
struct MethodSummary {
  std::string env;
  std::string method;
  std::size_t trials = 0;
  double avg_paths_found = 0.0;
  std::size_t trials_in_order = 0;
  double avg_successful_policies = 0.0;
  std::size_t successful_trials = 0;
  std::vector<std::string> runs;
};

inline std::string method_label(const trial::TrialMetrics& m) {
  if (m.combiner == "wsr") return "wsr(" + detail::fixed(m.wsr_weight, 0) + ")";
  return m.combiner == "plain" ? "ppo" : m.combiner;
}

struct Comparison {
  std::vector<MethodSummary> rows;  // grouped by environment, methods in first-seen order
  std::vector<std::pair<std::string, std::string>> skipped;  // (dir, reason)
};

inline Comparison summarize_runs(const std::vector<fs::path>& dirs, std::ostream* warnings) {
  Comparison c;
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, trial::TrialMetrics>>> groups;
  for (const auto& dir : dirs) {
    try {
      trial::TrialMetrics m = trial::metrics_from_json(read_json_file(dir / trial::kMetricsFile));
      const auto key = std::make_pair(m.env, method_label(m));
      if (!groups.count(key)) order.push_back(key);
      groups[key].emplace_back(dir.string(), std::move(m));
    } catch (const std::exception& e) {
      c.skipped.emplace_back(dir.string(), e.what());
      if (warnings) *warnings << "warning: skipping " << dir.string() << ": " << e.what() << "\n";
    }
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& key : order) {
    MethodSummary s;
    s.env = key.first;
    s.method = key.second;
    double paths = 0, succ = 0;
    for (const auto& [dir, m] : groups[key]) {
      ++s.trials;
      paths += static_cast<double>(m.paths_found);
      succ += static_cast<double>(m.successful_policies);
      if (m.in_order) ++s.trials_in_order;
      if (m.successful_trial) ++s.successful_trials;
      s.runs.push_back(dir);
    }
    s.avg_paths_found = paths / static_cast<double>(s.trials);
    s.avg_successful_policies = succ / static_cast<double>(s.trials);
    c.rows.push_back(std::move(s));
  }
  return c;
}

// Columns shown for an environment: arm discovery for the 4-Way Maze,
// success counts otherwise.
inline std::vector<std::string> metric_columns(const std::string& env) {
  if (envs::env_family(env) == envs::EnvFamily::four_way) return {"Avg # Paths Found", "# Trials In Order"};
  return {"Avg # Succ Policies", "# Succ Trials"};
}

inline std::vector<std::string> metric_cells(const MethodSummary& s) {
  const std::string n = std::to_string(s.trials);
  if (envs::env_family(s.env) == envs::EnvFamily::four_way) {
    return {detail::fixed(s.avg_paths_found), std::to_string(s.trials_in_order) + "/" + n};
  }
  return {detail::fixed(s.avg_successful_policies), std::to_string(s.successful_trials) + "/" + n};
}

inline Json summary_to_json(const MethodSummary& s) {
  Json j{{"env", s.env}, {"method", s.method}, {"trials", s.trials}, {"runs", s.runs}};
  if (envs::env_family(s.env) == envs::EnvFamily::four_way) {
    j["avg_paths_found"] = s.avg_paths_found;
    j["trials_in_order"] = s.trials_in_order;
  } else {
    j["avg_successful_policies"] = s.avg_successful_policies;
    j["successful_trials"] = s.successful_trials;
  }
  return j;
}

inline std::string comparison_text(const Comparison& c) {
  std::string out;
  std::size_t i = 0;
  while (i < c.rows.size()) {
    const std::string env = c.rows[i].env;
    std::vector<std::string> header{"Method", "Trials"};
    for (auto& col : metric_columns(env)) header.push_back(col);
    std::vector<std::vector<std::string>> rows;
    for (; i < c.rows.size() && c.rows[i].env == env; ++i) {
      std::vector<std::string> r{c.rows[i].method, std::to_string(c.rows[i].trials)};
      for (auto& cell : metric_cells(c.rows[i])) r.push_back(cell);
      rows.push_back(std::move(r));
    }
    if (!out.empty()) out += "\n";
    out += env + "\n" + detail::render_table(header, rows);
  }
  return out;
}

inline Json comparison_json(const Comparison& c) {
  Json rows = Json::array();
  for (const auto& s : c.rows) rows.push_back(summary_to_json(s));
  Json skipped = Json::array();
  for (const auto& [dir, reason] : c.skipped) skipped.push_back({{"dir", dir}, {"reason", reason}});
  return {{"format", "tnb-compare"}, {"version", 1}, {"rows", rows}, {"skipped", skipped}};
}

// Prints the text table to `out`; writes the JSON summary to `json_path` when given.
inline int cmd_compare(const std::vector<fs::path>& dirs, const std::optional<fs::path>& json_path, std::ostream& out,
                       std::ostream& err) {
  const Comparison c = summarize_runs(dirs, &err);
  out << comparison_text(c);
  if (json_path) {
    try {
      write_json_file(*json_path, comparison_json(c));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

inline std::string weight_dir_name(double w) {
  std::string s = detail::fixed(w, 6);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return "wsr_" + s;
}

// One wsr trial per weight under <out>/wsr_<weight>, all with the configured
// seed, followed by a per-weight table (JSON copy in <out>/sweep.json).
inline int cmd_sweep_wsr(const RunOptions& options, const std::vector<double>& weights, std::ostream& out,
                         std::ostream& err) {
  RunConfig base;
  fs::path root;
  try {
    if (weights.empty()) throw ConfigError("sweep-wsr: no weights given");
    for (double w : weights) {
      if (!(w > 0) || !std::isfinite(w)) throw ConfigError("sweep-wsr: weights must be positive, got " + detail::fixed(w, 6));
    }
    std::vector<std::string> overrides = options.overrides;
    overrides.push_back("trial.combiner=wsr");
    overrides.push_back("trial.wsr_weight=" + detail::fixed(weights.front(), 6));
    base = load_run_config(options.config_path, overrides);
    root = options.out ? *options.out : fs::path(base.output_dir);
    if (detail::non_empty_dir(root) && !options.force) {
      throw ConfigError("sweep directory " + root.string() + " is not empty (use --force to overwrite)");
    }
    if (options.force) fs::remove_all(root);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  int status = kExitOk;
  std::vector<std::vector<std::string>> rows;
  Json json_rows = Json::array();
  std::vector<std::string> header{"Weights"};
  for (auto& col : metric_columns(base.trial.env_name)) header.push_back(col);
  for (double w : weights) {
    RunConfig config = base;
    config.trial.combiner = {pg::Combiner::wsr, w};
    const fs::path dir = root / weight_dir_name(w);
    config.output_dir = dir.string();
    fs::path prepared;
    try {
      prepared = detail::prepare_run_dir(config, dir, false);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitRuntime;
    }
    const int rc = detail::execute_trial(config, prepared, out, err);
    if (rc != kExitOk) status = rc;
    const Comparison c = summarize_runs({prepared}, &err);
    if (c.rows.empty()) continue;
    std::vector<std::string> row{detail::fixed(w, w == static_cast<double>(static_cast<long long>(w)) ? 0 : 3)};
    for (auto& cell : metric_cells(c.rows.front())) row.push_back(cell);
    rows.push_back(row);
    Json j = summary_to_json(c.rows.front());
    j["weight"] = w;
    json_rows.push_back(j);
  }
  const std::string table = detail::render_table(header, rows);
  out << table;
  try {
    write_text_file(root / "sweep.txt", table);
    write_json_file(root / "sweep.json", {{"format", "tnb-sweep"}, {"version", 1}, {"rows", json_rows}});
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return status;
}

}  // namespace tnb::cli

#endif  // TNB_CLI_COMMANDS_HPP_
