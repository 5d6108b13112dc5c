#ifndef TNB_TRIAL_CONFIG_HPP_
#define TNB_TRIAL_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tnb/envs/registry.hpp"
#include "tnb/novelty/autoencoder.hpp"
#include "tnb/novelty/segments.hpp"
#include "tnb/pg/trainer.hpp"

namespace tnb::trial {

// Where autoencoder training data comes from: `snapshots` policies evenly
// spaced over the last `snapshot_window` iterations, each rolled out
// `rollouts_per_snapshot` times.
struct AeDataConfig {
  std::size_t snapshots = 10;
  std::size_t snapshot_window = 50;
  std::size_t rollouts_per_snapshot = 100;
  std::size_t window_stride = 0;  // 0 means disjoint chunks (stride L)
  bool stochastic = true;

  void validate() const {
    if (snapshots == 0) throw ConfigError("ae_data.snapshots must be positive");
    if (snapshot_window == 0) throw ConfigError("ae_data.snapshot_window must be positive");
    if (rollouts_per_snapshot == 0) throw ConfigError("ae_data.rollouts_per_snapshot must be positive");
  }
};

struct AutoencoderConfig {
  std::vector<std::size_t> hidden = novelty::kCompactAutoencoderHidden;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double min_stddev = 0.1;

  void validate() const {
    if (hidden.empty()) throw ConfigError("autoencoder.hidden must be non-empty");
    for (auto h : hidden) {
      if (h == 0) throw ConfigError("autoencoder.hidden entries must be positive");
    }
    if (epochs == 0) throw ConfigError("autoencoder.epochs must be positive");
    if (batch_size == 0) throw ConfigError("autoencoder.batch_size must be positive");
    if (!(learning_rate > 0)) throw ConfigError("autoencoder.learning_rate must be positive");
    if (!(min_stddev > 0)) throw ConfigError("autoencoder.min_stddev must be positive");
  }
};

struct TrialConfig {
  std::size_t k = 4;
  pg::CombinerSpec combiner;
  std::string env_name = envs::kFourWayMaze;
  Json env_params = Json::object();
  std::size_t per_policy_budget = 100000;
  std::uint64_t seed = 0;
  AeDataConfig ae_data;
  novelty::SegmentConfig segment;
  AutoencoderConfig autoencoder;
  pg::PpoConfig ppo;
  std::size_t eval_episodes = 1;

  void validate() const {
    if (k == 0) throw ConfigError("trial.k must be at least 1");
    if (per_policy_budget == 0) throw ConfigError("trial.per_policy_budget must be positive");
    if (eval_episodes == 0) throw ConfigError("trial.eval_episodes must be positive");
    combiner.validate();
    envs::env_family(env_name);
    ae_data.validate();
    segment.validate();
    autoencoder.validate();
    ppo.validate();
  }

  // Plain-PPO trials give every policy its own seed; the novelty-seeking
  // methods initialize all k policies from the trial seed.
  std::uint64_t policy_seed(std::size_t index) const {
    if (combiner.kind == pg::Combiner::plain) return derive_seed(seed, "policy-" + std::to_string(index));
    return seed;
  }

  std::uint64_t autoencoder_seed(std::size_t index) const {
    return derive_seed(seed, "autoencoder-" + std::to_string(index));
  }

  std::uint64_t harvest_seed(std::size_t index) const { return derive_seed(seed, "harvest-" + std::to_string(index)); }
};

}  // namespace tnb::trial

#endif  // TNB_TRIAL_CONFIG_HPP_
