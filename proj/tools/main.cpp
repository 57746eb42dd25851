#include <CLI11.hpp>

#include "chebplan/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimum-time point-mass trajectory planner with pseudospectral collocation "
               "and an APF safety layer"};
  app.require_subcommand(1);

  chebplan::RunArgs run_args;
  auto* run = app.add_subcommand("run", "Closed-loop simulation of a scenario");
  run->add_option("--scenario", run_args.scenario_path, "Scenario YAML file")->required();
  run->add_option("--out", run_args.out_dir, "Output directory for log.csv/solves.json/metrics.json")
      ->required();
  run->add_option("--mode", run_args.mode, "lockstep (deterministic) or realtime");
  run->add_option("--solve-ticks", run_args.solve_ticks,
                  "Lockstep publish delay in controller ticks (<=0: derive from rates)");
  run->add_option("--seed", run_args.seed, "Seed echoed into the sidecar");
  run->add_flag("--disable-planner", run_args.disable_planner,
                "Disable replanning after the first solve (APF-only degraded mode)");

  std::string plan_scenario, plan_out;
  auto* plan = app.add_subcommand("plan", "Single open-loop solve from the start state");
  plan->add_option("--scenario", plan_scenario, "Scenario YAML file")->required();
  plan->add_option("--out", plan_out, "Output JSON path")->required();

  std::string validate_scenario;
  auto* validate = app.add_subcommand("validate", "Check a scenario and echo the normalized config");
  validate->add_option("--scenario", validate_scenario, "Scenario YAML file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return chebplan::cmd_run(run_args);
  if (plan->parsed()) return chebplan::cmd_plan(plan_scenario, plan_out);
  return chebplan::cmd_validate(validate_scenario);
}
