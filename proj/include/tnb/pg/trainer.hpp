#ifndef TNB_PG_TRAINER_HPP_
#define TNB_PG_TRAINER_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tnb/io.hpp"
#include "tnb/pg/collect.hpp"
#include "tnb/pg/combine.hpp"
#include "tnb/pg/gae.hpp"
#include "tnb/pg/surrogate.hpp"
#include "tnb/pg/value.hpp"

namespace tnb::pg {

enum class Optimizer { adam, sgd };

inline Optimizer optimizer_from_string(const std::string& s) {
  if (s == "adam") return Optimizer::adam;
  if (s == "sgd") return Optimizer::sgd;
  throw ConfigError("unknown optimizer '" + s + "' (expected adam or sgd)");
}

inline std::string to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

struct PpoConfig {
  std::size_t steps_per_iteration = 2000;
  std::size_t epochs = 3;
  std::size_t minibatch_size = 64;
  double policy_lr = 3e-3;
  double value_lr = 1e-3;
  double clip = 0.2;
  double gamma = 0.99;
  double lambda = 0.95;
  bool normalize_advantages = true;
  bool normalize_value_targets = true;
  Optimizer optimizer = Optimizer::adam;
  std::vector<std::size_t> policy_hidden{64, 64, 64};
  std::vector<std::size_t> value_hidden{64, 64, 64};
  double init_log_std = 0.0;
  bool log_wall_clock = true;

  void validate() const {
    if (steps_per_iteration == 0) throw ConfigError("ppo.steps_per_iteration must be positive");
    if (epochs == 0) throw ConfigError("ppo.epochs must be positive");
    if (minibatch_size == 0) throw ConfigError("ppo.minibatch_size must be positive");
    if (!(policy_lr > 0)) throw ConfigError("ppo.policy_lr must be positive");
    if (!(value_lr > 0)) throw ConfigError("ppo.value_lr must be positive");
    if (!(clip > 0 && clip < 1)) throw ConfigError("ppo.clip must lie in (0, 1)");
    if (!(gamma > 0 && gamma <= 1)) throw ConfigError("ppo.gamma must lie in (0, 1]");
    if (!(lambda >= 0 && lambda <= 1)) throw ConfigError("ppo.lambda must lie in [0, 1]");
    if (policy_hidden.empty() || value_hidden.empty()) throw ConfigError("ppo: hidden layer lists must be non-empty");
  }
};

struct CombinerSpec {
  Combiner kind = Combiner::tnb;
  double wsr_weight = 0.0;

  void validate() const {
    if (kind == Combiner::wsr && !(wsr_weight >= 0 && std::isfinite(wsr_weight))) {
      throw ConfigError("wsr weight must be finite and non-negative");
    }
  }
};

// Policies to keep for autoencoder data: `count` snapshots evenly spaced over
// the final `window` iterations, the last one being the final policy.
struct SnapshotPlan {
  std::size_t count = 10;
  std::size_t window = 50;
};

inline std::vector<std::size_t> snapshot_iterations(std::size_t iterations, const SnapshotPlan& plan) {
  std::vector<std::size_t> out;
  if (iterations == 0 || plan.count == 0) return out;
  const std::size_t window = std::clamp<std::size_t>(plan.window, 1, iterations);
  const std::size_t count = std::min(plan.count, window);
  for (std::size_t j = 1; j <= count; ++j) {
    out.push_back(iterations - window + (j * window) / count - 1);
  }
  return out;
}

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t total_steps = 0;
  std::size_t episodes = 0;
  double mean_task_return = 0.0;
  double mean_novelty_return = 0.0;
  double mean_episode_length = 0.0;
  double termination_rate = 0.0;
  std::size_t bisector_minibatches = 0;
  std::size_t projection_minibatches = 0;
  double value_loss_task = 0.0;
  double value_loss_novelty = 0.0;
  double log_std_mean = 0.0;
  std::optional<double> wall_clock_seconds;

  Json to_json() const {
    Json j{{"iteration", iteration},
           {"total_steps", total_steps},
           {"episodes", episodes},
           {"mean_task_return", mean_task_return},
           {"mean_novelty_return", mean_novelty_return},
           {"mean_episode_length", mean_episode_length},
           {"termination_rate", termination_rate},
           {"bisector_minibatches", bisector_minibatches},
           {"projection_minibatches", projection_minibatches},
           {"value_loss_task", value_loss_task},
           {"value_loss_novelty", value_loss_novelty},
           {"log_std_mean", log_std_mean}};
    if (wall_clock_seconds) j["wall_clock_seconds"] = *wall_clock_seconds;
    return j;
  }
};

struct TrainingResult {
  GaussianPolicy policy;
  std::vector<IterationRecord> log;
  std::vector<GaussianPolicy> snapshots;
  std::vector<std::size_t> snapshot_iterations;
  std::size_t total_steps = 0;
  bool aborted = false;
  std::string abort_reason;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

inline std::size_t iteration_count(std::size_t budget, const PpoConfig& ppo) {
  return (budget + ppo.steps_per_iteration - 1) / ppo.steps_per_iteration;
}

namespace detail {

struct StreamLearner {
  ValueFunction value;
  nn::AdamState adam;
  TargetStatistics stats;
  nn::ForwardCache cache;
  std::vector<double> grad;

  StreamLearner(std::size_t obs_dim, const PpoConfig& ppo, std::uint64_t seed, const char* tag) {
    Rng rng = make_rng(seed, tag);
    value = ValueFunction::create(obs_dim, ppo.value_hidden, rng);
    adam = nn::AdamState(value.params.size(), ppo.value_lr);
  }

  AdvantageBatch advantages(std::span<const Rollout> rollouts, std::span<const std::vector<double>> rewards,
                            const PpoConfig& ppo) {
    auto [values, bootstrap] = evaluate_values(rollouts, value);
    AdvantageBatch batch = compute_gae(rollouts, rewards, values, bootstrap, ppo.gamma, ppo.lambda);
    if (ppo.normalize_value_targets) {
      stats.update(batch.value_targets);
      value.rescale(stats.mean, stats.stddev());
    }
    if (ppo.normalize_advantages) normalize_advantages(batch.advantages);
    return batch;
  }
};

inline Matrix gather_columns(const Matrix& source, std::span<const std::size_t> index) {
  Matrix out(source.rows(), static_cast<Eigen::Index>(index.size()));
  for (std::size_t i = 0; i < index.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = source.col(static_cast<Eigen::Index>(index[i]));
  return out;
}

template <class T>
std::vector<T> gather(const std::vector<T>& source, std::span<const std::size_t> index) {
  std::vector<T> out;
  out.reserve(index.size());
  for (std::size_t i : index) out.push_back(source[i]);
  return out;
}

inline double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace detail

// PPO training of one policy. The task stream always drives learning; the
// novelty stream is active for the tnb and tnb_noproj combiners when the
// autoencoder set is non-empty. wsr folds weighted novelty rewards into the
// task stream. With an inactive novelty stream g_novel is the zero vector and
// every combiner reduces to plain PPO.
inline TrainingResult train_policy(const envs::Environment& env_prototype, const novelty::AutoencoderSet& ae_set,
                                   const novelty::SegmentConfig& segment, const CombinerSpec& combiner,
                                   std::size_t budget, const PpoConfig& ppo, std::uint64_t seed,
                                   const SnapshotPlan& plan = {}, const IterationCallback& on_iteration = {}) {
  if (budget == 0) throw ConfigError("training budget must be positive");
  ppo.validate();
  combiner.validate();
  segment.validate();

  auto env = env_prototype.clone();
  const std::size_t obs_dim = env->observation_dim();
  TrainingResult result;
  result.policy = GaussianPolicy::create(obs_dim, env->action_dim(), ppo.policy_hidden, ppo.init_log_std, seed);
  GaussianPolicy& policy = result.policy;

  const bool uses_novelty = combiner.kind != Combiner::plain && !ae_set.empty();
  const bool dual_stream = uses_novelty && combiner.kind != Combiner::wsr;
  static const novelty::AutoencoderSet kNoAutoencoders;
  const novelty::AutoencoderSet& scoring_set = uses_novelty ? ae_set : kNoAutoencoders;

  detail::StreamLearner task(obs_dim, ppo, seed, "value-task-init");
  detail::StreamLearner novel(obs_dim, ppo, seed, "value-novelty-init");
  nn::AdamState policy_adam(policy.param_count(), ppo.policy_lr);
  Rng rollout_rng = make_rng(seed, "rollouts");
  Rng minibatch_rng = make_rng(seed, "minibatches");

  const std::size_t iterations = iteration_count(budget, ppo);
  result.snapshot_iterations = snapshot_iterations(iterations, plan);
  const auto start_time = std::chrono::steady_clock::now();

  for (std::size_t it = 0; it < iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    const std::vector<double> last_good = policy.params;
    try {
      std::vector<Rollout> rollouts =
          collect_rollouts(policy, *env, scoring_set, segment, ppo.steps_per_iteration, rollout_rng);

      std::vector<std::vector<double>> task_rewards, novelty_rewards;
      std::size_t steps = 0;
      std::vector<double> task_returns, novelty_returns;
      std::size_t terminated = 0;
      for (const auto& r : rollouts) {
        task_rewards.push_back(combiner.kind == Combiner::wsr && uses_novelty
                                   ? combine_wsr(r.task_rewards, r.novelty_rewards, combiner.wsr_weight)
                                   : r.task_rewards);
        novelty_rewards.push_back(r.novelty_rewards);
        steps += r.length();
        task_returns.push_back(r.task_return());
        novelty_returns.push_back(r.novelty_return());
        terminated += r.terminated ? 1 : 0;
      }
      result.total_steps += steps;
      rec.total_steps = result.total_steps;
      rec.episodes = rollouts.size();
      rec.mean_task_return = detail::mean_of(task_returns);
      rec.mean_novelty_return = detail::mean_of(novelty_returns);
      rec.mean_episode_length = static_cast<double>(steps) / static_cast<double>(rollouts.size());
      rec.termination_rate = static_cast<double>(terminated) / static_cast<double>(rollouts.size());

      const AdvantageBatch task_adv = task.advantages(rollouts, task_rewards, ppo);
      std::optional<AdvantageBatch> novel_adv;
      if (dual_stream) novel_adv = novel.advantages(rollouts, novelty_rewards, ppo);

      std::vector<envs::Observation> all_obs;
      std::vector<std::vector<double>> all_actions;
      std::vector<double> all_logp;
      for (const auto& r : rollouts) {
        all_obs.insert(all_obs.end(), r.states.begin(), r.states.end());
        all_actions.insert(all_actions.end(), r.actions.begin(), r.actions.end());
        all_logp.insert(all_logp.end(), r.log_probs.begin(), r.log_probs.end());
      }
      const Matrix obs_matrix = nn::columns(all_obs, obs_dim);
      const Matrix act_matrix = nn::columns(all_actions, policy.action_dim());

      std::vector<std::size_t> order(steps);
      double task_loss = 0.0, novel_loss = 0.0;
      std::size_t loss_count = 0;
      for (std::size_t epoch = 0; epoch < ppo.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), minibatch_rng);
        for (std::size_t begin = 0; begin < steps; begin += ppo.minibatch_size) {
          const std::span<const std::size_t> idx(order.data() + begin, std::min(ppo.minibatch_size, steps - begin));
          Minibatch mb{detail::gather_columns(obs_matrix, idx), detail::gather_columns(act_matrix, idx),
                       detail::gather(all_logp, idx)};
          const SurrogateEvaluator surrogate(policy, mb);
          const std::vector<double> a_task = detail::gather(task_adv.advantages, idx);
          const std::vector<double> g_task = surrogate.gradient(a_task, ppo.clip);

          std::vector<double> g_novel(g_task.size(), 0.0);
          if (novel_adv) {
            const std::vector<double> a_novel = detail::gather(novel_adv->advantages, idx);
            g_novel = surrogate.gradient(a_novel, ppo.clip);
          }

          std::vector<double> g_final;
          Branch branch = Branch::projection;
          switch (combiner.kind) {
            case Combiner::tnb:
              g_final = combine_tnb(g_task, g_novel, &branch);
              break;
            case Combiner::tnb_noproj:
              branch = dot(g_task, g_novel) > 0.0 ? Branch::bisector : Branch::projection;
              g_final = combine_tnb_noproj(g_task, g_novel);
              break;
            case Combiner::plain:
            case Combiner::wsr:
              branch = dot(g_task, g_novel) > 0.0 ? Branch::bisector : Branch::projection;
              g_final = g_task;
              break;
          }
          (branch == Branch::bisector ? rec.bisector_minibatches : rec.projection_minibatches) += 1;

          if (!nn::all_finite(g_final)) {
            throw TrainingError(std::string("non-finite policy gradient (task ") +
                                (nn::all_finite(g_task) ? "finite" : "non-finite") + ", novelty " +
                                (nn::all_finite(g_novel) ? "finite" : "non-finite") + ")");
          }
          if (ppo.optimizer == Optimizer::adam) {
            nn::adam_step(policy_adam, policy.params, g_final, /*maximize=*/true);
          } else {
            nn::sgd_step(policy.params, g_final, ppo.policy_lr, /*maximize=*/true);
          }
          policy.clamp_log_std();
          if (!nn::all_finite(policy.params)) throw TrainingError("policy parameters became non-finite");

          const std::vector<double> t_task = detail::gather(task_adv.value_targets, idx);
          task_loss += value_regression_step(task.value, mb.observations, t_task, task.adam, task.cache, task.grad);
          if (novel_adv) {
            const std::vector<double> t_novel = detail::gather(novel_adv->value_targets, idx);
            novel_loss +=
                value_regression_step(novel.value, mb.observations, t_novel, novel.adam, novel.cache, novel.grad);
          }
          ++loss_count;
        }
      }
      rec.value_loss_task = task_loss / static_cast<double>(loss_count);
      rec.value_loss_novelty = novel_loss / static_cast<double>(loss_count);
      if (!std::isfinite(rec.value_loss_task) || !std::isfinite(rec.value_loss_novelty)) {
        throw TrainingError("value loss became non-finite");
      }
      const auto ls = policy.log_std();
      rec.log_std_mean = detail::mean_of(ls);
    } catch (const TrainingError& e) {
      policy.params = last_good;
      result.aborted = true;
      result.abort_reason = "iteration " + std::to_string(it) + ": " + e.what();
      break;
    }
    if (ppo.log_wall_clock) {
      rec.wall_clock_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    }
    result.log.push_back(rec);
    if (std::find(result.snapshot_iterations.begin(), result.snapshot_iterations.end(), it) !=
        result.snapshot_iterations.end()) {
      result.snapshots.push_back(policy);
    }
    if (on_iteration) on_iteration(rec);
  }
  if (result.snapshots.empty()) result.snapshots.push_back(policy);
  return result;
}

}  // namespace tnb::pg

#endif  // TNB_PG_TRAINER_HPP_
