#ifndef AOINET_EXPERIMENT_HPP
#define AOINET_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aoinet/model.hpp"
#include "aoinet/mspadam.hpp"

namespace aoinet::exp {

inline constexpr const char* kVersion = "0.1.0";

struct SweepAxis {
  std::string variable = "q";
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

// Parsed experiment configuration: plain `key = value` lines, `#` comments,
// matrices referenced by path relative to the config file.
struct ExperimentSpec {
  std::string name = "experiment";
  int n = 0;
  int aoi_cap = 20;
  double power_transmit = 100.0;
  double power_idle = 1.0;
  double energy_budget = 1e6;

  // correlation source: file or generator (exactly one)
  std::string correlation_file;
  bool has_generator = false;
  double corr_diag = 1.0;
  double corr_lo = 0.0;
  double corr_hi = 0.0;
  double corr_density = 1.0;

  // policy source: explicit values (scalar broadcasts) or strategy name
  std::vector<double> policy;
  std::string strategy;

  std::optional<SweepAxis> sweep;
  bool sweep_simulate = false;

  std::int64_t sim_slots = 1000000;
  std::int64_t sim_warmup = 1000;
  int replications = 1;

  mspadam::OptimizerConfig opt;  // weights live here
  double q_epsilon = 1e-4;

  std::uint64_t seed = 0;

  std::string source_path;  // where the spec was read from, "" for builtin
  std::vector<std::pair<std::string, std::string>> raw;  // manifest echo
};

ExperimentSpec parse_spec(std::istream& in, const std::string& path);
ExperimentSpec parse_spec_file(const std::string& path);

struct RunOptions {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides the spec seed
  int threads = 0;
  bool verbose = false;
  std::string trace_path;       // simulate: per-slot trace CSV
  bool dump_gradient = false;   // analytic: write gradients CSV
  bool dump_trajectories = false;  // opt-mspadam: per-iteration CSV
};

// Resolution helpers shared by the runners (exposed for tests).
std::uint64_t effective_seed(const ExperimentSpec& spec, const RunOptions& opt);
NetworkModel build_model(const ExperimentSpec& spec, std::uint64_t seed);
Policy build_policy(const ExperimentSpec& spec, const NetworkModel& model,
                    std::uint64_t seed, int threads);

// Runners write a manifest plus their CSV artifacts under opt.out_dir and
// throw ConfigError / Error on failure.
void run_analytic(const ExperimentSpec& spec, const RunOptions& opt);
void run_simulate(const ExperimentSpec& spec, const RunOptions& opt);
void run_sweep(const ExperimentSpec& spec, const RunOptions& opt);
void run_opt_homogeneous(const ExperimentSpec& spec, const RunOptions& opt);
void run_opt_mspadam(const ExperimentSpec& spec, const RunOptions& opt);

// Built-in reproduction presets: fig5, fig6, fig7, fig8, table3.
void run_reproduce(const std::string& target, const RunOptions& opt);

}  // namespace aoinet::exp

#endif  // AOINET_EXPERIMENT_HPP
