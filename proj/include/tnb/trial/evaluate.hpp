#ifndef TNB_TRIAL_EVALUATE_HPP_
#define TNB_TRIAL_EVALUATE_HPP_

#include <charconv>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tnb/novelty/reward.hpp"
#include "tnb/pg/collect.hpp"
#include "tnb/trial/config.hpp"

namespace tnb::trial {

inline constexpr int kMetricsVersion = 1;
inline constexpr int kTrajectoryCsvVersion = 1;

struct PolicyEvaluation {
  std::size_t index = 0;  // 1-based position in the trial
  std::size_t episodes = 0;
  std::size_t successes = 0;
  int goal_index = 0;  // arm reached in the first episode, 0 for none
  double mean_return = 0.0;
  double mean_length = 0.0;
  bool training_aborted = false;

  bool success() const { return successes > 0; }
};

struct TrialMetrics {
  std::string env;
  std::string combiner;
  double wsr_weight = 0.0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t eval_episodes = 1;
  std::vector<PolicyEvaluation> policies;
  std::vector<int> arm_sequence;
  std::size_t paths_found = 0;
  bool in_order = false;
  std::size_t successful_policies = 0;
  bool successful_trial = false;
  bool complete = false;
};

// Arms reached by policies 1..k must be exactly 1, 2, ..., k: every policy
// reaches a goal, no arm repeats, and the arms come in decreasing reward order.
inline bool arms_in_order(std::span<const int> arms, std::size_t k) {
  if (arms.size() != k || k == 0 || k > 4) return false;
  for (std::size_t i = 0; i < k; ++i) {
    if (arms[i] != static_cast<int>(i + 1)) return false;
  }
  return true;
}

inline std::size_t distinct_paths(std::span<const int> arms) {
  std::set<int> seen;
  for (int a : arms) {
    if (a > 0) seen.insert(a);
  }
  return seen.size();
}

// Fills the trial-level aggregates from the per-policy records.
inline void summarize(TrialMetrics& m) {
  m.arm_sequence.clear();
  m.successful_policies = 0;
  for (const auto& p : m.policies) {
    m.arm_sequence.push_back(p.goal_index);
    if (p.success()) ++m.successful_policies;
  }
  m.successful_trial = m.successful_policies > 0;
  m.complete = m.policies.size() == m.k;
  if (envs::env_family(m.env) == envs::EnvFamily::four_way) {
    m.paths_found = distinct_paths(m.arm_sequence);
    m.in_order = m.complete && arms_in_order(m.arm_sequence, m.k);
  } else {
    m.paths_found = 0;
    m.in_order = false;
  }
}

inline Json metrics_to_json(const TrialMetrics& m) {
  Json policies = Json::array();
  for (const auto& p : m.policies) {
    policies.push_back({{"index", p.index},
                        {"episodes", p.episodes},
                        {"successes", p.successes},
                        {"success", p.success()},
                        {"goal_index", p.goal_index},
                        {"mean_return", p.mean_return},
                        {"mean_length", p.mean_length},
                        {"training_aborted", p.training_aborted}});
  }
  return {{"format", "tnb-metrics"},
          {"version", kMetricsVersion},
          {"env", m.env},
          {"combiner", m.combiner},
          {"wsr_weight", m.wsr_weight},
          {"k", m.k},
          {"seed", m.seed},
          {"eval_episodes", m.eval_episodes},
          {"trajectory_csv_version", kTrajectoryCsvVersion},
          {"policies", policies},
          {"arm_sequence", m.arm_sequence},
          {"paths_found", m.paths_found},
          {"in_order", m.in_order},
          {"successful_policies", m.successful_policies},
          {"successful_trial", m.successful_trial},
          {"complete", m.complete}};
}

inline TrialMetrics metrics_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "tnb-metrics") throw FormatError("not a tnb-metrics document");
  if (j.value("version", -1) != kMetricsVersion) throw FormatError("unsupported tnb-metrics version");
  try {
    TrialMetrics m;
    m.env = j.at("env").get<std::string>();
    m.combiner = j.at("combiner").get<std::string>();
    m.wsr_weight = j.at("wsr_weight").get<double>();
    m.k = j.at("k").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.eval_episodes = j.at("eval_episodes").get<std::size_t>();
    for (const auto& p : j.at("policies")) {
      PolicyEvaluation e;
      e.index = p.at("index").get<std::size_t>();
      e.episodes = p.at("episodes").get<std::size_t>();
      e.successes = p.at("successes").get<std::size_t>();
      e.goal_index = p.at("goal_index").get<int>();
      e.mean_return = p.at("mean_return").get<double>();
      e.mean_length = p.at("mean_length").get<double>();
      e.training_aborted = p.at("training_aborted").get<bool>();
      m.policies.push_back(e);
    }
    summarize(m);
    return m;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("corrupt metrics: ") + e.what());
  }
}

namespace detail {

inline void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace detail

// Header: policy,episode,step,s0..s{n-1},a0..a{m-1},task_reward,novelty_reward.
// Each episode ends with one extra row holding the final state and empty
// action/reward cells.
inline std::string trajectories_csv(std::size_t policy_index, std::span<const Rollout> rollouts,
                                    std::size_t state_dim, std::size_t action_dim) {
  std::string out = "policy,episode,step";
  for (std::size_t i = 0; i < state_dim; ++i) out += ",s" + std::to_string(i);
  for (std::size_t i = 0; i < action_dim; ++i) out += ",a" + std::to_string(i);
  out += ",task_reward,novelty_reward\n";
  for (std::size_t e = 0; e < rollouts.size(); ++e) {
    const Rollout& r = rollouts[e];
    const std::string prefix = std::to_string(policy_index) + "," + std::to_string(e) + ",";
    for (std::size_t t = 0; t <= r.length(); ++t) {
      out += prefix + std::to_string(t);
      const auto& s = t < r.length() ? r.states[t] : r.final_state;
      for (double v : s) {
        out += ',';
        detail::append_number(out, v);
      }
      for (std::size_t i = 0; i < action_dim; ++i) {
        out += ',';
        if (t < r.length()) detail::append_number(out, r.actions[t][i]);
      }
      out += ',';
      if (t < r.length()) detail::append_number(out, r.task_rewards[t]);
      out += ',';
      if (t < r.length()) detail::append_number(out, r.novelty_rewards[t]);
      out += '\n';
    }
  }
  return out;
}

// Deterministic (mean-action) evaluation of one policy. When `novelty_set` is
// given, the recorded rollouts carry novelty rewards against it.
inline PolicyEvaluation evaluate_policy(const pg::GaussianPolicy& policy, const envs::Environment& env,
                                        std::size_t index, std::size_t episodes, std::uint64_t seed,
                                        const novelty::AutoencoderSet* novelty_set,
                                        const novelty::SegmentConfig& segment, std::vector<Rollout>* rollouts) {
  auto instance = env.clone();
  Rng rng = make_rng(seed, "evaluation-" + std::to_string(index));
  PolicyEvaluation ev;
  ev.index = index;
  ev.episodes = episodes;
  double total_return = 0.0, total_length = 0.0;
  for (std::size_t e = 0; e < episodes; ++e) {
    Rollout r = pg::run_episode(policy, *instance, rng, pg::ActionMode::mean);
    const auto success = r.final_info.find(envs::info_keys::kSuccess);
    const bool ok = r.terminated && success != r.final_info.end() && success->second > 0.5;
    if (ok) ++ev.successes;
    if (e == 0 && ok) {
      const auto goal = r.final_info.find(envs::info_keys::kGoalIndex);
      if (goal != r.final_info.end()) ev.goal_index = static_cast<int>(goal->second);
    }
    total_return += r.task_return();
    total_length += static_cast<double>(r.length());
    if (novelty_set != nullptr) novelty::annotate_novelty(r, *novelty_set, segment);
    if (rollouts != nullptr) rollouts->push_back(std::move(r));
  }
  ev.mean_return = total_return / static_cast<double>(episodes);
  ev.mean_length = total_length / static_cast<double>(episodes);
  return ev;
}

}  // namespace tnb::trial

#endif  // TNB_TRIAL_EVALUATE_HPP_
