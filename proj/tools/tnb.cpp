// Command-line front end: run, eval, compare, sweep-wsr.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tnb/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace tnb::cli;
  CLI::App app{"Sequential novel-policy training with task-novelty gradient bisection"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_config, run_out;
  auto* run_cmd = app.add_subcommand("run", "train one trial of k policies");
  run_cmd->add_option("--config", run_config, "run configuration (JSON)");
  run_cmd->add_option("--override", run.overrides, "key=value, repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  run_cmd->add_flag("--force", run.force, "overwrite a non-empty run directory");
  run_cmd->add_option("--out", run_out, "run directory (overrides output.dir)");

  std::string eval_dir;
  std::vector<std::string> eval_overrides;
  auto* eval_cmd = app.add_subcommand("eval", "re-evaluate a run directory");
  eval_cmd->add_option("run_dir", eval_dir, "run directory")->required();
  eval_cmd->add_option("--override", eval_overrides, "key=value applied to the stored config")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> compare_dirs;
  std::string compare_json;
  auto* compare_cmd = app.add_subcommand("compare", "summarize run directories per method");
  compare_cmd->add_option("run_dirs", compare_dirs, "run directories");
  compare_cmd->add_option("--json", compare_json, "also write the summary as JSON");

  RunOptions sweep;
  std::string sweep_config, sweep_out;
  std::vector<double> weights{100, 200, 500, 1000};
  auto* sweep_cmd = app.add_subcommand("sweep-wsr", "one weighted-sum trial per novelty weight");
  sweep_cmd->add_option("--config", sweep_config, "run configuration (JSON)");
  sweep_cmd->add_option("--override", sweep.overrides, "key=value, repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep_cmd->add_option("--weights", weights, "novelty weights")->delimiter(',');
  sweep_cmd->add_flag("--force", sweep.force, "overwrite a non-empty sweep directory");
  sweep_cmd->add_option("--out", sweep_out, "sweep directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (*run_cmd) {
    run.config_path = run_config;
    if (!run_out.empty()) run.out = run_out;
    return cmd_run(run, std::cout, std::cerr);
  }
  if (*eval_cmd) return cmd_eval(eval_dir, eval_overrides, std::cout, std::cerr);
  if (*compare_cmd) {
    std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
    std::optional<std::filesystem::path> json;
    if (!compare_json.empty()) json = compare_json;
    return cmd_compare(dirs, json, std::cout, std::cerr);
  }
  sweep.config_path = sweep_config;
  if (!sweep_out.empty()) sweep.out = sweep_out;
  return cmd_sweep_wsr(sweep, weights, std::cout, std::cerr);
}
