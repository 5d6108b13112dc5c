#ifndef TNB_CLI_RUN_CONFIG_HPP_
#define TNB_CLI_RUN_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "tnb/json_reader.hpp"
#include "tnb/trial/config.hpp"

namespace tnb::cli {

// A run configuration is one JSON document with a section per module:
//
//   trial        k, combiner, wsr_weight, per_policy_budget, seed, eval_episodes
//   env          name, params (environment-specific, see envs/registry.hpp)
//   segment      length, stride, w_novel
//   ae_data      snapshots, snapshot_window, rollouts_per_snapshot, window_stride, stochastic
//   autoencoder  hidden, epochs, batch_size, learning_rate, min_stddev
//   ppo          steps_per_iteration, epochs, minibatch_size, policy_lr, value_lr, clip,
//                gamma, lambda, normalize_advantages, normalize_value_targets, optimizer,
//                policy_hidden, value_hidden, init_log_std, log_wall_clock
//   output       dir
//
// Every key is optional and unknown keys are errors.
struct RunConfig {
  trial::TrialConfig trial;
  std::string output_dir = "runs/default";
};

inline const std::vector<std::string>& config_sections() {
  static const std::vector<std::string> sections{"trial", "env", "segment", "ae_data", "autoencoder", "ppo", "output"};
  return sections;
}

namespace detail {

inline std::vector<std::size_t> layer_list(JsonReader& r, const std::string& key, std::vector<std::size_t> fallback) {
  const bool present = r.has(key);
  const Json value = r.get<Json>(key, Json());
  if (!present) return fallback;
  if (!value.is_array() || value.empty()) throw ConfigError(r.child_path(key) + ": expected a non-empty list");
  std::vector<std::size_t> out;
  for (const auto& v : value) {
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) {
      throw ConfigError(r.child_path(key) + ": entries must be positive integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline RunConfig config_from_json(const Json& doc) {
  RunConfig c;
  trial::TrialConfig& t = c.trial;
  JsonReader root(doc, "");

  JsonReader tr(root.child("trial"), "trial");
  t.k = tr.get("k", t.k);
  t.combiner.kind = pg::combiner_from_string(tr.get<std::string>("combiner", pg::to_string(t.combiner.kind)));
  t.combiner.wsr_weight = tr.get("wsr_weight", t.combiner.wsr_weight);
  t.per_policy_budget = tr.get("per_policy_budget", t.per_policy_budget);
  t.seed = tr.get("seed", t.seed);
  t.eval_episodes = tr.get("eval_episodes", t.eval_episodes);
  tr.finish();

  JsonReader env(root.child("env"), "env");
  t.env_name = env.get<std::string>("name", t.env_name);
  t.env_params = envs::resolve_env_params(t.env_name, env.child("params"), "env.params");
  env.finish();

  JsonReader seg(root.child("segment"), "segment");
  t.segment.length = seg.get("length", t.segment.length);
  t.segment.stride = seg.get("stride", t.segment.stride);
  t.segment.w_novel = seg.get("w_novel", t.segment.w_novel);
  seg.finish();

  JsonReader ad(root.child("ae_data"), "ae_data");
  t.ae_data.snapshots = ad.get("snapshots", t.ae_data.snapshots);
  t.ae_data.snapshot_window = ad.get("snapshot_window", t.ae_data.snapshot_window);
  t.ae_data.rollouts_per_snapshot = ad.get("rollouts_per_snapshot", t.ae_data.rollouts_per_snapshot);
  t.ae_data.window_stride = ad.get("window_stride", t.ae_data.window_stride);
  t.ae_data.stochastic = ad.get("stochastic", t.ae_data.stochastic);
  ad.finish();

  JsonReader ae(root.child("autoencoder"), "autoencoder");
  t.autoencoder.hidden = detail::layer_list(ae, "hidden", t.autoencoder.hidden);
  t.autoencoder.epochs = ae.get("epochs", t.autoencoder.epochs);
  t.autoencoder.batch_size = ae.get("batch_size", t.autoencoder.batch_size);
  t.autoencoder.learning_rate = ae.get("learning_rate", t.autoencoder.learning_rate);
  t.autoencoder.min_stddev = ae.get("min_stddev", t.autoencoder.min_stddev);
  ae.finish();

  JsonReader pp(root.child("ppo"), "ppo");
  pg::PpoConfig& p = t.ppo;
  p.steps_per_iteration = pp.get("steps_per_iteration", p.steps_per_iteration);
  p.epochs = pp.get("epochs", p.epochs);
  p.minibatch_size = pp.get("minibatch_size", p.minibatch_size);
  p.policy_lr = pp.get("policy_lr", p.policy_lr);
  p.value_lr = pp.get("value_lr", p.value_lr);
  p.clip = pp.get("clip", p.clip);
  p.gamma = pp.get("gamma", p.gamma);
  p.lambda = pp.get("lambda", p.lambda);
  p.normalize_advantages = pp.get("normalize_advantages", p.normalize_advantages);
  p.normalize_value_targets = pp.get("normalize_value_targets", p.normalize_value_targets);
  p.optimizer = pg::optimizer_from_string(pp.get<std::string>("optimizer", pg::to_string(p.optimizer)));
  p.policy_hidden = detail::layer_list(pp, "policy_hidden", p.policy_hidden);
  p.value_hidden = detail::layer_list(pp, "value_hidden", p.value_hidden);
  p.init_log_std = pp.get("init_log_std", p.init_log_std);
  p.log_wall_clock = pp.get("log_wall_clock", p.log_wall_clock);
  pp.finish();

  JsonReader out(root.child("output"), "output");
  c.output_dir = out.get<std::string>("dir", c.output_dir);
  out.finish();

  root.finish();
  if (t.combiner.kind == pg::Combiner::wsr && !(t.combiner.wsr_weight > 0)) {
    throw ConfigError("trial.wsr_weight: must be positive for the wsr combiner");
  }
  t.validate();
  return c;
}

// Fully resolved document; config_from_json(config_to_json(c)) reproduces c.
inline Json config_to_json(const RunConfig& c) {
  const trial::TrialConfig& t = c.trial;
  const pg::PpoConfig& p = t.ppo;
  return {{"trial",
           {{"k", t.k},
            {"combiner", pg::to_string(t.combiner.kind)},
            {"wsr_weight", t.combiner.wsr_weight},
            {"per_policy_budget", t.per_policy_budget},
            {"seed", t.seed},
            {"eval_episodes", t.eval_episodes}}},
          {"env", {{"name", t.env_name}, {"params", t.env_params}}},
          {"segment", {{"length", t.segment.length}, {"stride", t.segment.stride}, {"w_novel", t.segment.w_novel}}},
          {"ae_data",
           {{"snapshots", t.ae_data.snapshots},
            {"snapshot_window", t.ae_data.snapshot_window},
            {"rollouts_per_snapshot", t.ae_data.rollouts_per_snapshot},
            {"window_stride", t.ae_data.window_stride},
            {"stochastic", t.ae_data.stochastic}}},
          {"autoencoder",
           {{"hidden", t.autoencoder.hidden},
            {"epochs", t.autoencoder.epochs},
            {"batch_size", t.autoencoder.batch_size},
            {"learning_rate", t.autoencoder.learning_rate},
            {"min_stddev", t.autoencoder.min_stddev}}},
          {"ppo",
           {{"steps_per_iteration", p.steps_per_iteration},
            {"epochs", p.epochs},
            {"minibatch_size", p.minibatch_size},
            {"policy_lr", p.policy_lr},
            {"value_lr", p.value_lr},
            {"clip", p.clip},
            {"gamma", p.gamma},
            {"lambda", p.lambda},
            {"normalize_advantages", p.normalize_advantages},
            {"normalize_value_targets", p.normalize_value_targets},
            {"optimizer", pg::to_string(p.optimizer)},
            {"policy_hidden", p.policy_hidden},
            {"value_hidden", p.value_hidden},
            {"init_log_std", p.init_log_std},
            {"log_wall_clock", p.log_wall_clock}}},
          {"output", {{"dir", c.output_dir}}}};
}

// "key=value" with the value parsed as JSON, falling back to a bare string.
// The key is either dotted ("trial.seed", "env.params.horizon") or a bare
// name that occurs in exactly one section ("seed").
inline void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  std::vector<std::string> parts;
  for (std::size_t pos = 0;;) {
    const auto dot = key.find('.', pos);
    parts.push_back(key.substr(pos, dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  if (parts.size() == 1) {
    // Resolve a bare key against the known schema (the resolved defaults).
    const Json defaults = config_to_json(RunConfig{});
    std::vector<std::string> owners;
    for (const auto& section : config_sections()) {
      if (defaults.at(section).contains(key)) owners.push_back(section);
    }
    if (owners.empty()) throw ConfigError("unknown key '" + key + "'");
    if (owners.size() > 1) {
      std::string list;
      for (const auto& o : owners) list += (list.empty() ? "" : ", ") + o + "." + key;
      throw ConfigError("ambiguous key '" + key + "' (candidates: " + list + ")");
    }
    parts.insert(parts.begin(), owners.front());
  }
  if (!doc.is_object()) doc = Json::object();
  Json* node = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    Json& next = (*node)[parts[i]];
    if (next.is_null()) next = Json::object();
    if (!next.is_object()) throw ConfigError("override '" + key + "': '" + parts[i] + "' is not a section");
    node = &next;
  }
  (*node)[parts.back()] = std::move(value);
}

inline RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  Json doc = path.empty() ? Json::object() : read_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

}  // namespace tnb::cli

#endif  // TNB_CLI_RUN_CONFIG_HPP_
