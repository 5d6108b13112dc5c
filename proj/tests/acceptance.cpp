// Acceptance checks, one per criterion. Each prints a single PASS/FAIL line
// and returns non-zero on failure.
//
//   tnb_acceptance --criterion 5 --work-dir build/acceptance
//
// Criteria 5 and 6 run the desk-scale configurations shipped in configs/.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "tnb/cli/commands.hpp"

#ifndef TNB_CONFIG_DIR
#define TNB_CONFIG_DIR "configs"
#endif

using namespace tnb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<double> normal_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// ---------------------------------------------------------------- 1

Outcome gradient_correctness() {
  struct Case {
    nn::MlpSpec spec;
    const char* name;
  };
  const std::vector<Case> cases{
      {{4, {64, 64, 64}, 2, nn::Activation::tanh, nn::Activation::linear}, "policy"},
      {{4, {64, 64, 64}, 1, nn::Activation::tanh, nn::Activation::linear}, "value"},
      {{24, {32, 16, 32}, 24, nn::Activation::relu, nn::Activation::linear}, "autoencoder"},
      {{3, {5}, 2, nn::Activation::relu, nn::Activation::linear}, "small relu"}};
  const double h = 1e-6;
  const std::size_t kParamsPerCase = 64;
  Rng rng(20240601);
  double worst = 0.0;
  std::string worst_name;
  for (const auto& c : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      auto p = nn::init_params(c.spec, rng);
      for (auto& v : p) v += 0.05 * normal_vector(1, rng)[0];
      const auto x = normal_vector(c.spec.input_dim, rng);
      const auto g = normal_vector(c.spec.output_dim, rng);
      const nn::Gradients grads = nn::mlp_backward(c.spec, p, x, g);
      auto objective = [&](const std::vector<double>& params, const std::vector<double>& in) {
        const auto y = nn::mlp_forward(c.spec, params, in);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * g[i];
        return s;
      };
      auto rel = [](double a, double n) {
        const double scale = std::max(std::abs(a), std::abs(n));
        // Both sides below the finite-difference noise floor count as agreeing.
        return scale < 1e-7 ? 0.0 : std::abs(a - n) / scale;
      };
      std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
      for (std::size_t k = 0; k < std::min(kParamsPerCase, p.size()); ++k) {
        const std::size_t i = p.size() <= kParamsPerCase ? k : pick(rng);
        auto plus = p, minus = p;
        plus[i] += h;
        minus[i] -= h;
        const double fd = (objective(plus, x) - objective(minus, x)) / (2 * h);
        const double e = rel(grads.params[i], fd);
        if (e > worst) worst = e, worst_name = c.name;
      }
      for (std::size_t i = 0; i < x.size(); ++i) {
        auto plus = x, minus = x;
        plus[i] += h;
        minus[i] -= h;
        const double fd = (objective(p, plus) - objective(p, minus)) / (2 * h);
        const double e = rel(grads.input[i], fd);
        if (e > worst) worst = e, worst_name = c.name;
      }
    }
  }
  return {worst < 1e-4, "max relative error " + fmt("%.2e", worst) + " (" + worst_name + ") over 4 specs x 100 cases"};
}

// ---------------------------------------------------------------- 2

Outcome combiner_geometry() {
  Rng rng(7);
  std::uniform_int_distribution<std::size_t> dim(2, 40);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  std::size_t bisector = 0, projection = 0, violations = 0;
  double worst_cos = 1.0, worst_orth = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = dim(rng);
    const auto gt = normal_vector(n, rng, std::pow(10.0, log_scale(rng)));
    const auto gn = normal_vector(n, rng, std::pow(10.0, log_scale(rng)));
    pg::Branch branch;
    const auto g = pg::combine_tnb(gt, gn, &branch);
    if (branch == pg::Branch::bisector) {
      ++bisector;
      if (pg::dot(g, gt) < 0 || pg::dot(g, gn) < 0) ++violations;
      std::vector<double> scaled = gn;
      const double c = std::pow(10.0, log_scale(rng));
      for (auto& v : scaled) v *= c;
      pg::Branch again;
      const auto g2 = pg::combine_tnb(gt, scaled, &again);
      if (again != pg::Branch::bisector) ++violations;
      const double cos = pg::dot(g, g2) / (pg::norm(g) * pg::norm(g2));
      worst_cos = std::min(worst_cos, cos);
    } else {
      ++projection;
      // Orthogonality measured relative to the magnitudes involved.
      const double orth = std::abs(pg::dot(g, gn)) / (pg::norm(gt) * pg::norm(gn));
      worst_orth = std::max(worst_orth, orth);
      if (pg::dot(g, gt) < 0) ++violations;
    }
  }
  const bool pass = violations == 0 && worst_cos >= 1 - 1e-10 && worst_orth < 1e-10 && bisector > 0 && projection > 0;
  return {pass, std::to_string(bisector) + " bisector / " + std::to_string(projection) + " projection cases, " +
                    std::to_string(violations) + " sign violations, min rescale cosine 1-" +
                    fmt("%.1e", 1 - worst_cos) + ", max |g.gn|/(|gt||gn|) " + fmt("%.1e", worst_orth)};
}

// ---------------------------------------------------------------- 3

Outcome novelty_formula() {
  bool pass = novelty::novelty_from_error(0.0, 2.0) == -1.0;
  const double half = novelty::novelty_from_error(0.34657, 2.0);
  pass = pass && std::abs(half + 0.5) < 1e-5;
  double prev = -2.0;
  bool monotone = true, bounded = true;
  for (int i = 0; i <= 2000; ++i) {
    const double e = 1e-3 * i * i;
    const double r = novelty::novelty_from_error(e, 2.0);
    if (r < prev) monotone = false;
    if (!(r > -1.0 || e == 0.0) || r > 0.0) bounded = false;
    prev = r;
  }
  pass = pass && monotone && bounded;
  return {pass, "f(0)=-1, f(0.34657)=" + fmt("%.7f", half) + (monotone ? ", monotone" : ", NOT monotone") +
                    (bounded ? ", within (-1, 0]" : ", out of range")};
}

// ---------------------------------------------------------------- 4

std::vector<novelty::StateSegment> trajectory_cluster(std::size_t n, double heading, std::uint64_t seed) {
  // Segments shaped like maze segments: 6 states of (x, y, vx, vy) moving
  // along `heading`, with per-segment jitter.
  Rng rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::uniform_real_distribution<double> start(4.0, 6.0);
  std::vector<novelty::StateSegment> out;
  for (std::size_t k = 0; k < n; ++k) {
    double x = start(rng), y = start(rng);
    const double vx = std::cos(heading) + jitter(rng), vy = std::sin(heading) + jitter(rng);
    novelty::StateSegment s;
    for (int j = 0; j < 6; ++j) {
      s.insert(s.end(), {x + jitter(rng), y + jitter(rng), vx + jitter(rng), vy + jitter(rng)});
      x += 0.2 * vx;
      y += 0.2 * vy;
    }
    out.push_back(std::move(s));
  }
  return out;
}

Outcome autoencoder_discrimination() {
  const auto train = trajectory_cluster(2000, 0.0, 1);
  const auto held_a = trajectory_cluster(500, 0.0, 2);
  const auto held_b = trajectory_cluster(500, 1.5707963267948966, 3);
  const auto spec = novelty::autoencoder_spec(24, novelty::kCompactAutoencoderHidden);
  novelty::AutoencoderSet set;
  set.add(novelty::train_autoencoder(train, spec, {100, 64, 1e-3, 0.1, 5}));
  const novelty::SegmentConfig seg{10, 2, 2.0};
  double ea = 0, eb = 0;
  std::size_t ordered = 0;
  for (std::size_t i = 0; i < held_a.size(); ++i) {
    ea += set.min_error(held_a[i]);
    eb += set.min_error(held_b[i]);
    if (novelty::novelty_reward(held_a[i], set, seg) < novelty::novelty_reward(held_b[i], set, seg)) ++ordered;
  }
  ea /= static_cast<double>(held_a.size());
  eb /= static_cast<double>(held_b.size());
  const double frac = static_cast<double>(ordered) / static_cast<double>(held_a.size());
  return {eb >= 5 * ea && frac >= 0.95, "held-out error A " + fmt("%.4f", ea) + ", B " + fmt("%.4f", eb) + " (ratio " +
                                            fmt("%.1f", eb / ea) + "), A more negative in " +
                                            fmt("%.1f", 100 * frac) + "% of pairs"};
}

// ---------------------------------------------------------------- 5, 6

trial::TrialMetrics run_desk_trial(const fs::path& config, std::uint64_t seed, const fs::path& dir) {
  cli::RunConfig c = cli::load_run_config(config, {"trial.seed=" + std::to_string(seed)});
  c.output_dir = dir.string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_json_file(dir / cli::kResolvedConfigFile, cli::config_to_json(c));
  const auto start = std::chrono::steady_clock::now();
  const trial::TrialRecord rec = trial::run_trial(c.trial, dir);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "  " << dir.filename().string() << ": arms [";
  for (std::size_t i = 0; i < rec.metrics.arm_sequence.size(); ++i) {
    std::cerr << (i ? ", " : "") << rec.metrics.arm_sequence[i];
  }
  std::cerr << "], successful policies " << rec.metrics.successful_policies << " (" << fmt("%.0f", secs) << " s)\n";
  return rec.metrics;
}

struct MethodTotals {
  double paths = 0;
  std::size_t in_order = 0;
  std::size_t successes = 0;
  std::size_t successful_trials = 0;
};

MethodTotals run_seeds(const std::string& config_name, const fs::path& work, const std::string& tag) {
  MethodTotals t;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = run_desk_trial(fs::path(TNB_CONFIG_DIR) / config_name, seed,
                                  work / (tag + "_seed" + std::to_string(seed)));
    t.paths += static_cast<double>(m.paths_found) / 5.0;
    t.in_order += m.in_order ? 1 : 0;
    t.successes += m.successful_policies;
    t.successful_trials += m.successful_trial ? 1 : 0;
  }
  return t;
}

Outcome four_way_ordering(const fs::path& work) {
  const MethodTotals tnb = run_seeds("four_way_tnb.json", work / "four_way", "tnb");
  const MethodTotals ppo = run_seeds("four_way_ppo.json", work / "four_way", "ppo");
  const bool pass = tnb.paths >= 3.0 && tnb.paths > ppo.paths && ppo.paths <= 2.5;
  return {pass, "avg paths found TNB " + fmt("%.1f", tnb.paths) + " vs PPO " + fmt("%.1f", ppo.paths) +
                    "; trials in order TNB " + std::to_string(tnb.in_order) + "/5, PPO " +
                    std::to_string(ppo.in_order) + "/5"};
}

Outcome deceptive_ordering(const fs::path& work) {
  const MethodTotals tnb = run_seeds("dmaze_tnb.json", work / "dmaze", "tnb");
  const MethodTotals ppo = run_seeds("dmaze_ppo.json", work / "dmaze", "ppo");
  const bool pass = tnb.successes > ppo.successes && tnb.successful_trials >= 2;
  return {pass, "successful policies TNB " + std::to_string(tnb.successes) + " vs PPO " +
                    std::to_string(ppo.successes) + "; trials with a success TNB " +
                    std::to_string(tnb.successful_trials) + "/5, PPO " + std::to_string(ppo.successful_trials) + "/5"};
}

// ---------------------------------------------------------------- 7

Outcome first_policy_equivalence(const fs::path& work) {
  cli::RunConfig c = cli::load_run_config(fs::path(TNB_CONFIG_DIR) / "four_way_tnb.json",
                                          {"trial.k=1", "trial.seed=7", "ppo.log_wall_clock=false"});
  const fs::path dir = work / "first_policy";
  fs::remove_all(dir);
  trial::run_trial(c.trial, dir);
  std::ifstream in(trial::training_log_path(dir, 1), std::ios::binary);
  std::stringstream trial_log;
  trial_log << in.rdbuf();

  auto env = envs::make_env(c.trial.env_name, c.trial.env_params);
  std::string plain_log;
  pg::train_policy(*env, {}, c.trial.segment, {pg::Combiner::plain, 0.0}, c.trial.per_policy_budget, c.trial.ppo,
                   c.trial.seed, {}, [&](const pg::IterationRecord& r) { plain_log += r.to_json().dump() + "\n"; });
  const bool same = trial_log.str() == plain_log && !plain_log.empty();
  const auto lines = std::count(plain_log.begin(), plain_log.end(), '\n');
  return {same, std::to_string(lines) + " iterations, " + std::to_string(plain_log.size()) + " bytes, logs " +
                    (same ? "bit-identical" : "DIFFER")};
}

// ---------------------------------------------------------------- 8

Rollout synthetic_rollout(std::size_t n, std::size_t obs_dim, bool terminated, Rng& rng) {
  Rollout r;
  for (std::size_t t = 0; t < n; ++t) {
    r.states.push_back(normal_vector(obs_dim, rng));
    r.actions.push_back({});
    r.log_probs.push_back(0.0);
    r.task_rewards.push_back(normal_vector(1, rng)[0]);
    r.novelty_rewards.push_back(-std::exp(-std::abs(normal_vector(1, rng)[0])));
  }
  r.final_state = normal_vector(obs_dim, rng);
  r.terminated = terminated;
  return r;
}

Outcome wsr_gradient_relationship() {
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto policy = pg::GaussianPolicy::create(3, 2, {6, 6}, -0.3, 100 + trial);
    const std::vector<Rollout> rollouts{synthetic_rollout(9, 3, true, rng), synthetic_rollout(7, 3, false, rng)};
    const double w = std::exp(normal_vector(1, rng)[0]);

    std::vector<std::vector<double>> rt, rn, rc, vt, vn, vc;
    std::vector<double> bt, bn, bc;
    for (const auto& r : rollouts) {
      rt.push_back(r.task_rewards);
      rn.push_back(r.novelty_rewards);
      rc.push_back(pg::combine_wsr(r.task_rewards, r.novelty_rewards, w));
      vt.push_back(normal_vector(r.length(), rng));
      vn.push_back(normal_vector(r.length(), rng));
      // Shared baselines: the combined stream's critic is V_task + w V_novel.
      vc.emplace_back();
      for (std::size_t t = 0; t < r.length(); ++t) vc.back().push_back(vt.back()[t] + w * vn.back()[t]);
      bt.push_back(normal_vector(1, rng)[0]);
      bn.push_back(normal_vector(1, rng)[0]);
      bc.push_back(bt.back() + w * bn.back());
    }
    const auto at = pg::compute_gae(rollouts, rt, vt, bt, 0.99, 0.95).advantages;
    const auto an = pg::compute_gae(rollouts, rn, vn, bn, 0.99, 0.95).advantages;
    const auto ac = pg::compute_gae(rollouts, rc, vc, bc, 0.99, 0.95).advantages;

    // Behavior log-probs near the current ones keep every ratio inside the clip band.
    const std::size_t n = at.size();
    pg::Minibatch mb;
    mb.observations = nn::Matrix::Random(3, static_cast<Eigen::Index>(n));
    mb.actions = nn::Matrix::Random(2, static_cast<Eigen::Index>(n));
    std::uniform_real_distribution<double> wiggle(-0.1, 0.1);
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index col = static_cast<Eigen::Index>(i);
      const std::vector<double> obs(mb.observations.col(col).data(), mb.observations.col(col).data() + 3);
      const std::vector<double> act(mb.actions.col(col).data(), mb.actions.col(col).data() + 2);
      mb.old_log_probs.push_back(policy.log_prob(obs, act) + wiggle(rng));
    }
    const pg::SurrogateEvaluator eval(policy, mb);
    const auto gt = eval.gradient(at, 0.2);
    const auto gn = eval.gradient(an, 0.2);
    const auto gc = eval.gradient(ac, 0.2);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < gc.size(); ++i) {
      const double expect = gt[i] + w * gn[i];
      diff += (gc[i] - expect) * (gc[i] - expect);
      scale += gc[i] * gc[i];
    }
    worst = std::max(worst, std::sqrt(diff / scale));
  }
  return {worst < 1e-8, "max relative error |g_wsr - (g_task + w g_novel)| / |g_wsr| = " + fmt("%.2e", worst) +
                            " over 20 batches"};
}

// ---------------------------------------------------------------- 9

Outcome gae_oracle() {
  Rng rng(5);
  std::bernoulli_distribution coin(0.5);
  double worst = 0.0;
  const double gamma = 0.99, lambda = 0.95;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rollout> rollouts;
    std::vector<std::vector<double>> rewards, values;
    std::vector<double> bootstrap;
    for (int e = 0; e < 3; ++e) {
      rollouts.push_back(synthetic_rollout(50, 2, coin(rng), rng));
      rewards.push_back(normal_vector(50, rng));
      values.push_back(normal_vector(50, rng));
      bootstrap.push_back(normal_vector(1, rng)[0]);
    }
    const auto batch = pg::compute_gae(rollouts, rewards, values, bootstrap, gamma, lambda);
    std::size_t k = 0;
    for (std::size_t e = 0; e < rollouts.size(); ++e) {
      const auto& r = rewards[e];
      const auto& v = values[e];
      const std::size_t T = r.size();
      auto next_v = [&](std::size_t t) {
        if (t + 1 < T) return v[t + 1];
        return rollouts[e].terminated ? 0.0 : bootstrap[e];
      };
      for (std::size_t t = 0; t < T; ++t, ++k) {
        double a = 0.0;
        for (std::size_t l = t; l < T; ++l) {
          const double delta = r[l] + gamma * next_v(l) - v[l];
          a += std::pow(gamma * lambda, static_cast<double>(l - t)) * delta;
        }
        worst = std::max(worst, std::abs(a - batch.advantages[k]));
        worst = std::max(worst, std::abs(a + v[t] - batch.value_targets[k]));
      }
    }
  }
  return {worst < 1e-12, "max abs deviation from the double-loop sum " + fmt("%.2e", worst) + " over 300 episodes"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int criterion = 0;
  std::string work_dir = "acceptance";
  app.add_option("--criterion", criterion, "criterion number 1-9; 0 runs all")->check(CLI::Range(0, 9));
  app.add_option("--work-dir", work_dir, "scratch directory for trial outputs");
  CLI11_PARSE(app, argc, argv);

  const fs::path work(work_dir);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"gradient correctness", gradient_correctness},
      {"combiner geometry", combiner_geometry},
      {"novelty reward formula", novelty_formula},
      {"autoencoder discrimination", autoencoder_discrimination},
      {"4-Way Maze ordering", [&] { return four_way_ordering(work); }},
      {"D-Maze ordering", [&] { return deceptive_ordering(work); }},
      {"first-policy equivalence", [&] { return first_policy_equivalence(work); }},
      {"WSR gradient relationship", wsr_gradient_relationship},
      {"GAE oracle", gae_oracle}};

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (criterion != 0 && static_cast<std::size_t>(criterion) != i + 1) continue;
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << "criterion " << i + 1 << " (" << checks[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " - "
              << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
