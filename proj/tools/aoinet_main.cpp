// aoinet: analyze, simulate and optimize AoI and energy efficiency in
// correlated slotted-Aloha networks. See README.md for config keys and
// output schemas.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aoinet/errors.hpp"
#include "aoinet/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out_dir = "out";
  std::optional<std::int64_t> seed;
  int threads = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config) {
  CLI::Option* cfg = cmd->add_option("--config", args.config, "experiment config file");
  if (needs_config) cfg->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "seed overriding the config value");
  cmd->add_option("--threads", args.threads, "worker threads (0 = all)");
  cmd->add_flag("--verbose", args.verbose, "report each artifact written");
}

aoinet::exp::RunOptions to_options(const CommonArgs& args) {
  aoinet::exp::RunOptions opt;
  opt.out_dir = args.out_dir;
  if (args.seed) opt.seed = static_cast<std::uint64_t>(*args.seed);
  opt.threads = args.threads;
  opt.verbose = args.verbose;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AoI and energy efficiency in correlated slotted-Aloha networks"};
  app.require_subcommand(1);

  CommonArgs analytic_args, simulate_args, sweep_args, homo_args, mspadam_args,
      reproduce_args;
  bool dump_gradient = false;
  std::string trace_path;
  bool trajectories = false;
  std::string reproduce_target;

  CLI::App* analytic = app.add_subcommand(
      "analytic", "closed-form metrics for a model and policy");
  add_common(analytic, analytic_args, true);
  analytic->add_flag("--dump-gradient", dump_gradient,
                     "also write analytic gradients as CSV");

  CLI::App* simulate =
      app.add_subcommand("simulate", "slot-level Monte Carlo simulation");
  add_common(simulate, simulate_args, true);
  simulate->add_option("--trace", trace_path,
                       "write a per-slot trace CSV to this path");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "evaluate metrics over a homogeneous q grid");
  add_common(sweep, sweep_args, true);

  CLI::App* homo = app.add_subcommand(
      "opt-homogeneous", "closed-form optima and bounded exhaustive search");
  add_common(homo, homo_args, true);

  CLI::App* mspadam = app.add_subcommand(
      "opt-mspadam", "multi-start projected adaptive-moment optimization");
  add_common(mspadam, mspadam_args, true);
  mspadam->add_flag("--trajectories", trajectories,
                    "write per-iteration trajectories CSV");

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "run a built-in experiment preset");
  reproduce->add_option("target", reproduce_target, "fig5|fig6|fig7|fig8|table3")
      ->required();
  add_common(reproduce, reproduce_args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analytic->parsed()) {
      aoinet::exp::RunOptions opt = to_options(analytic_args);
      opt.dump_gradient = dump_gradient;
      aoinet::exp::run_analytic(aoinet::exp::parse_spec_file(analytic_args.config), opt);
    } else if (simulate->parsed()) {
      aoinet::exp::RunOptions opt = to_options(simulate_args);
      opt.trace_path = trace_path;
      aoinet::exp::run_simulate(aoinet::exp::parse_spec_file(simulate_args.config), opt);
    } else if (sweep->parsed()) {
      aoinet::exp::run_sweep(aoinet::exp::parse_spec_file(sweep_args.config),
                             to_options(sweep_args));
    } else if (homo->parsed()) {
      aoinet::exp::run_opt_homogeneous(
          aoinet::exp::parse_spec_file(homo_args.config), to_options(homo_args));
    } else if (mspadam->parsed()) {
      aoinet::exp::RunOptions opt = to_options(mspadam_args);
      opt.dump_trajectories = trajectories;
      aoinet::exp::run_opt_mspadam(
          aoinet::exp::parse_spec_file(mspadam_args.config), opt);
    } else if (reproduce->parsed()) {
      aoinet::exp::run_reproduce(reproduce_target, to_options(reproduce_args));
    }
  } catch (const aoinet::ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
