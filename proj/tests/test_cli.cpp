#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "tnb/cli/commands.hpp"

using namespace tnb;
using namespace tnb::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tnb_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(const Json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

Json tiny_doc() {
  return Json::parse(R"({
    "trial": {"k": 2, "combiner": "tnb", "per_policy_budget": 400, "seed": 3},
    "env": {"name": "four_way_maze", "params": {"horizon": 40}},
    "segment": {"length": 6, "stride": 2},
    "ae_data": {"snapshots": 2, "snapshot_window": 2, "rollouts_per_snapshot": 3},
    "autoencoder": {"hidden": [8, 4, 8], "epochs": 5, "batch_size": 16},
    "ppo": {"steps_per_iteration": 200, "policy_hidden": [8], "value_hidden": [8], "log_wall_clock": false}
  })");
}

fs::path write_tiny_config(const std::string& name) {
  const fs::path path = fs::temp_directory_path() / ("tnb_test_cli_" + name + ".json");
  write_json_file(path, tiny_doc());
  return path;
}

void write_metrics(const fs::path& dir, const std::string& env, const std::string& combiner, double weight,
                   std::vector<int> arms) {
  trial::TrialMetrics m;
  m.env = env;
  m.combiner = combiner;
  m.wsr_weight = weight;
  m.k = arms.size();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    trial::PolicyEvaluation p;
    p.index = i + 1;
    p.episodes = 1;
    p.successes = arms[i] > 0 ? 1 : 0;
    p.goal_index = arms[i];
    m.policies.push_back(p);
  }
  trial::summarize(m);
  fs::create_directories(dir);
  write_json_file(dir / trial::kMetricsFile, trial::metrics_to_json(m));
}

}  // namespace

TEST(RunConfig, EmptyDocumentGivesDefaults) {
  const RunConfig c = config_from_json(Json::object());
  EXPECT_EQ(c.trial.k, 4u);
  EXPECT_EQ(c.trial.combiner.kind, pg::Combiner::tnb);
  EXPECT_EQ(c.trial.segment.length, 45u);
  EXPECT_EQ(c.trial.ppo.clip, 0.2);
  EXPECT_EQ(c.trial.ppo.minibatch_size, 64u);
}

TEST(RunConfig, ResolvedDocumentRoundTrips) {
  const RunConfig c = config_from_json(tiny_doc());
  const Json resolved = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(resolved)), resolved);
  EXPECT_EQ(c.trial.env_params.at("horizon"), 40);
  EXPECT_EQ(c.trial.autoencoder.hidden, (std::vector<std::size_t>{8, 4, 8}));
}

TEST(RunConfig, UnknownKeysNameTheirPath) {
  EXPECT_NE(error_of({{"trail", Json::object()}}).find("'trail'"), std::string::npos);
  EXPECT_NE(error_of({{"ppo", {{"clip_range", 0.1}}}}).find("'ppo.clip_range'"), std::string::npos);
  EXPECT_NE(error_of({{"env", {{"params", {{"colour", 1}}}}}}).find("colour"), std::string::npos);
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_NE(error_of({{"trial", {{"k", 0}}}}).find("k"), std::string::npos);
  EXPECT_NE(error_of({{"trial", {{"k", -2}}}}).find("trial.k"), std::string::npos);
  EXPECT_NE(error_of({{"trial", {{"k", "four"}}}}).find("trial.k"), std::string::npos);
  EXPECT_NE(error_of({{"trial", {{"combiner", "greedy"}}}}).find("greedy"), std::string::npos);
  EXPECT_NE(error_of({{"trial", {{"combiner", "wsr"}}}}).find("wsr_weight"), std::string::npos);
  EXPECT_NE(error_of({{"ppo", {{"policy_hidden", Json::array()}}}}).find("ppo.policy_hidden"), std::string::npos);
  EXPECT_NE(error_of({{"ppo", {{"policy_hidden", {8, 0}}}}}).find("positive"), std::string::npos);
  EXPECT_NE(error_of({{"ppo", {{"clip", 1.5}}}}).find("clip"), std::string::npos);
  EXPECT_NE(error_of({{"env", {{"name", "atlantis"}}}}).find("atlantis"), std::string::npos);
  EXPECT_NE(error_of({{"segment", Json::array()}}).find("segment"), std::string::npos);
}

TEST(Override, DottedBareAndNested) {
  Json doc = Json::object();
  apply_override(doc, "trial.seed=42");
  apply_override(doc, "per_policy_budget=1000");
  apply_override(doc, "env.params.horizon=60");
  apply_override(doc, "combiner=tnb_noproj");
  apply_override(doc, "hidden=[4,2,4]");
  EXPECT_EQ(doc["trial"]["seed"], 42);
  EXPECT_EQ(doc["trial"]["per_policy_budget"], 1000);
  EXPECT_EQ(doc["env"]["params"]["horizon"], 60);
  EXPECT_EQ(doc["trial"]["combiner"], "tnb_noproj");
  EXPECT_EQ(doc["autoencoder"]["hidden"], Json::parse("[4,2,4]"));
  const RunConfig c = config_from_json(doc);
  EXPECT_EQ(c.trial.seed, 42u);
  EXPECT_EQ(c.trial.combiner.kind, pg::Combiner::tnb_noproj);
}

TEST(Override, AmbiguousAndMalformed) {
  Json doc = Json::object();
  try {
    apply_override(doc, "epochs=2");
    FAIL() << "expected an ambiguity error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("autoencoder.epochs"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("ppo.epochs"), std::string::npos);
  }
  EXPECT_THROW(apply_override(doc, "nonsense=1"), ConfigError);
  EXPECT_THROW(apply_override(doc, "seed"), ConfigError);
  EXPECT_THROW(apply_override(doc, "=3"), ConfigError);
  EXPECT_THROW(apply_override(doc, "trial=5"), ConfigError);
  doc["trial"] = 5;
  EXPECT_THROW(apply_override(doc, "trial.seed=1"), ConfigError);
}

TEST(Override, LaterOverridesWin) {
  const fs::path path = write_tiny_config("later");
  const RunConfig c = load_run_config(path, {"trial.seed=1", "seed=9"});
  EXPECT_EQ(c.trial.seed, 9u);
  EXPECT_EQ(c.trial.k, 2u);
}

TEST(CmdRun, WritesResolvedConfigAndRefusesToOverwrite) {
  const fs::path config = write_tiny_config("run");
  const fs::path dir = scratch("run_out");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run({config, {"trial.k=1"}, false, dir}, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  EXPECT_NE(out.str().find("paths found"), std::string::npos);
  const RunConfig echoed = load_run_config(dir / "config.json", {});
  EXPECT_EQ(echoed.trial.k, 1u);
  EXPECT_EQ(fs::path(echoed.output_dir), dir);

  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_run({config, {"trial.k=1"}, false, dir}, out2, err2), kExitValidation);
  EXPECT_NE(err2.str().find("--force"), std::string::npos);
  std::ostringstream out3, err3;
  EXPECT_EQ(cmd_run({config, {"trial.k=1"}, true, dir}, out3, err3), kExitOk) << err3.str();
}

TEST(CmdRun, InvalidConfigIsValidationError) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run({write_tiny_config("bad"), {"ppo.bogus=1"}, false, scratch("bad_out")}, out, err),
            kExitValidation);
  EXPECT_NE(err.str().find("ppo.bogus"), std::string::npos);
  EXPECT_EQ(cmd_run({fs::temp_directory_path() / "tnb_no_such_config.json", {}, false, scratch("missing")}, out, err),
            kExitValidation);
}

TEST(CmdEval, ReevaluatesWithOverrides) {
  const fs::path dir = scratch("eval");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run({write_tiny_config("eval"), {}, false, dir}, out, err), kExitOk) << err.str();
  ASSERT_EQ(cmd_eval(dir, {"trial.eval_episodes=3"}, out, err), kExitOk) << err.str();
  const auto m = trial::metrics_from_json(read_json_file(dir / "metrics.json"));
  EXPECT_EQ(m.eval_episodes, 3u);
  EXPECT_EQ(m.policies.size(), 2u);
  EXPECT_EQ(m.policies[0].episodes, 3u);
  EXPECT_EQ(cmd_eval(scratch("eval_empty"), {}, out, err), kExitValidation);
}

TEST(Compare, GroupsByEnvironmentAndMethod) {
  const fs::path root = scratch("compare");
  write_metrics(root / "a", "four_way_maze", "tnb", 0, {1, 2, 3, 4});
  write_metrics(root / "b", "four_way_maze", "tnb", 0, {1, 1, 2, 0});
  write_metrics(root / "c", "four_way_maze", "plain", 0, {1, 1, 1, 1});
  write_metrics(root / "d", "deceptive_maze", "tnb", 0, {0, 1, 1});
  write_metrics(root / "e", "four_way_maze", "wsr", 10, {1, 2, 2, 2});
  fs::create_directories(root / "broken");
  const Comparison c =
      summarize_runs({root / "a", root / "b", root / "c", root / "d", root / "e", root / "broken"}, nullptr);
  ASSERT_EQ(c.rows.size(), 4u);
  EXPECT_EQ(c.skipped.size(), 1u);
  EXPECT_EQ(c.rows[0].env, "deceptive_maze");
  EXPECT_DOUBLE_EQ(c.rows[0].avg_successful_policies, 2.0);
  EXPECT_EQ(c.rows[0].successful_trials, 1u);
  EXPECT_EQ(c.rows[1].method, "tnb");
  EXPECT_EQ(c.rows[1].trials, 2u);
  EXPECT_DOUBLE_EQ(c.rows[1].avg_paths_found, 3.0);
  EXPECT_EQ(c.rows[1].trials_in_order, 1u);
  EXPECT_EQ(c.rows[2].method, "ppo");
  EXPECT_DOUBLE_EQ(c.rows[2].avg_paths_found, 1.0);
  EXPECT_EQ(c.rows[3].method, "wsr(10)");

  const std::string text = comparison_text(c);
  EXPECT_NE(text.find("Avg # Paths Found"), std::string::npos);
  EXPECT_NE(text.find("Avg # Succ Policies"), std::string::npos);
  EXPECT_NE(text.find("1/2"), std::string::npos);
  const Json j = comparison_json(c);
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["skipped"].size(), 1u);
}

TEST(Compare, EmptyInputPrintsNothing) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_compare({}, std::nullopt, out, err), kExitOk);
  EXPECT_EQ(out.str(), "");
}

TEST(SweepWsr, RejectsNonPositiveWeights) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep_wsr({write_tiny_config("sweep"), {}, false, scratch("sweep")}, {1.0, 0.0}, out, err),
            kExitValidation);
  EXPECT_EQ(cmd_sweep_wsr({write_tiny_config("sweep"), {}, false, scratch("sweep")}, {}, out, err), kExitValidation);
  EXPECT_EQ(weight_dir_name(0.5), "wsr_0.5");
  EXPECT_EQ(weight_dir_name(10), "wsr_10");
}

TEST(SweepWsr, OneTrialPerWeight) {
  const fs::path root = scratch("sweep_run");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep_wsr({write_tiny_config("sweep_run"), {"trial.k=1"}, false, root}, {0.5, 2.0}, out, err),
            kExitOk)
      << err.str();
  EXPECT_TRUE(fs::exists(root / "wsr_0.5" / "metrics.json"));
  EXPECT_TRUE(fs::exists(root / "wsr_2" / "metrics.json"));
  const Json sweep = read_json_file(root / "sweep.json");
  ASSERT_EQ(sweep["rows"].size(), 2u);
  EXPECT_EQ(sweep["rows"][1]["weight"], 2.0);
  EXPECT_EQ(load_run_config(root / "wsr_2" / "config.json", {}).trial.combiner.wsr_weight, 2.0);
}
