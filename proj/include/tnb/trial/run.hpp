#ifndef TNB_TRIAL_RUN_HPP_
#define TNB_TRIAL_RUN_HPP_

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tnb/novelty/persistence.hpp"
#include "tnb/trial/evaluate.hpp"
#include "tnb/trial/harvest.hpp"

namespace tnb::trial {

namespace fs = std::filesystem;

inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kAutoencoderSetFile = "ae_set.json";
inline constexpr const char* kFailureMarker = "FAILED";

inline fs::path policy_path(const fs::path& dir, std::size_t i) { return dir / ("policy_" + std::to_string(i) + ".json"); }
inline fs::path training_log_path(const fs::path& dir, std::size_t i) {
  return dir / ("training_log_" + std::to_string(i) + ".jsonl");
}
inline fs::path trajectories_path(const fs::path& dir, std::size_t i) {
  return dir / ("trajectories_" + std::to_string(i) + ".csv");
}

struct TrialRecord {
  fs::path directory;
  std::vector<fs::path> policies;
  fs::path autoencoders;
  TrialMetrics metrics;
  std::uint64_t seed = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Raised after a partial trial has been written to disk.
class TrialAborted : public TrainingError {
 public:
  TrialAborted(const std::string& what, TrialRecord record) : TrainingError(what), record_(std::move(record)) {}
  const TrialRecord& record() const { return record_; }

 private:
  TrialRecord record_;
};

// Evaluates whichever policies of `config.k` exist in `dir` (stopping at the
// first missing one), rewrites the trajectory CSVs and returns the metrics.
// The autoencoder set is optional; without it trajectories carry zero novelty.
inline TrialMetrics evaluate_trial(const fs::path& dir, const TrialConfig& config,
                                   const std::vector<bool>& aborted = {}) {
  auto env = envs::make_env(config.env_name, config.env_params);
  std::optional<novelty::AutoencoderSet> set;
  if (fs::exists(dir / kAutoencoderSetFile)) set = novelty::load_autoencoder_set(dir / kAutoencoderSetFile);

  TrialMetrics m;
  m.env = config.env_name;
  m.combiner = pg::to_string(config.combiner.kind);
  m.wsr_weight = config.combiner.wsr_weight;
  m.k = config.k;
  m.seed = config.seed;
  m.eval_episodes = config.eval_episodes;
  for (std::size_t i = 1; i <= config.k; ++i) {
    const fs::path path = policy_path(dir, i);
    if (!fs::exists(path)) break;
    const pg::GaussianPolicy policy = pg::load_policy(path);
    const novelty::AutoencoderSet previous = set ? set->prefix(i - 1) : novelty::AutoencoderSet{};
    std::vector<Rollout> rollouts;
    PolicyEvaluation ev = evaluate_policy(policy, *env, i, config.eval_episodes, config.seed, &previous,
                                          config.segment, &rollouts);
    ev.training_aborted = i - 1 < aborted.size() && aborted[i - 1];
    m.policies.push_back(ev);
    write_text_file(trajectories_path(dir, i),
                    trajectories_csv(i, rollouts, env->observation_dim(), env->action_dim()));
  }
  summarize(m);
  return m;
}

// Trains the k policies of one trial into `dir`, one autoencoder per finished
// policy, then evaluates them. Progress lines go to `log` when given.
inline TrialRecord run_trial(const TrialConfig& config, const fs::path& dir, std::ostream* log = nullptr) {
  config.validate();
  fs::create_directories(dir);
  auto env = envs::make_env(config.env_name, config.env_params);
  const std::size_t segment_dim = config.segment.segment_dim(env->observation_dim());
  const nn::MlpSpec ae_spec = novelty::autoencoder_spec(segment_dim, config.autoencoder.hidden);
  const pg::SnapshotPlan plan{config.ae_data.snapshots, config.ae_data.snapshot_window};

  TrialRecord record;
  record.directory = dir;
  record.autoencoders = dir / kAutoencoderSetFile;
  record.seed = config.seed;
  novelty::AutoencoderSet set;
  std::vector<bool> aborted;
  const novelty::AutoencoderSet no_autoencoders;

  for (std::size_t i = 1; i <= config.k; ++i) {
    const bool plain = config.combiner.kind == pg::Combiner::plain;
    std::ofstream log_file(training_log_path(dir, i), std::ios::trunc);
    if (!log_file) throw FormatError("cannot write " + training_log_path(dir, i).string());
    const auto on_iteration = [&](const pg::IterationRecord& rec) {
      log_file << rec.to_json().dump() << '\n';
      log_file.flush();
    };
    if (log) *log << "policy " << i << "/" << config.k << ": training " << pg::to_string(config.combiner.kind) << '\n';
    pg::TrainingResult trained =
        pg::train_policy(*env, plain ? no_autoencoders : set, config.segment, config.combiner,
                         config.per_policy_budget, config.ppo, config.policy_seed(i), plan, on_iteration);
    pg::save_policy(policy_path(dir, i), trained.policy);
    record.policies.push_back(policy_path(dir, i));
    aborted.push_back(trained.aborted);
    if (log && !trained.log.empty()) {
      const auto& last = trained.log.back();
      *log << "policy " << i << ": " << last.total_steps << " steps, mean task return " << last.mean_task_return
           << ", termination rate " << last.termination_rate << '\n';
    }

    HarvestResult harvest = harvest_ae_data(trained.snapshots, *env, config.ae_data, config.segment,
                                            config.harvest_seed(i));
    if (harvest.segments.empty()) {
      // Short episodes: fall back to overlapping windows before giving up.
      AeDataConfig sliding = config.ae_data;
      sliding.window_stride = 1;
      harvest = harvest_ae_data(trained.snapshots, *env, sliding, config.segment, config.harvest_seed(i));
    }
    if (log) {
      for (const auto& w : harvest.warnings) *log << "warning: " << w << '\n';
    }
    if (harvest.segments.empty()) {
      throw TrainingError("policy " + std::to_string(i) + ": no segments of length " +
                          std::to_string(config.segment.length) + " to train its autoencoder");
    }
    if (log) *log << "policy " << i << ": autoencoder on " << harvest.segments.size() << " segments\n";
    novelty::AutoencoderTraining training{config.autoencoder.epochs, config.autoencoder.batch_size,
                                          config.autoencoder.learning_rate, config.autoencoder.min_stddev,
                                          config.autoencoder_seed(i)};
    set.add(novelty::train_autoencoder(harvest.segments, ae_spec, training));
    novelty::save_autoencoder_set(record.autoencoders, set);

    if (trained.aborted) {
      record.aborted = true;
      record.abort_reason = "policy " + std::to_string(i) + " " + trained.abort_reason;
      break;
    }
  }

  record.metrics = evaluate_trial(dir, config, aborted);
  write_json_file(dir / kMetricsFile, metrics_to_json(record.metrics));
  if (record.aborted) {
    write_text_file(dir / kFailureMarker, record.abort_reason + "\n");
    throw TrialAborted("training aborted: " + record.abort_reason, record);
  }
  return record;
}

}  // namespace tnb::trial

#endif  // TNB_TRIAL_RUN_HPP_
