#ifndef AOINET_MSPADAM_HPP
#define AOINET_MSPADAM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aoinet/analytic.hpp"
#include "aoinet/model.hpp"

namespace aoinet::mspadam {

struct OptimizerConfig {
  double learning_rate = 0.005;    // eta
  double tolerance = 1e-4;         // epsilon: iterate-difference stop rule
  double beta1 = 0.9;              // first-moment attenuation
  double beta2 = 0.999;            // second-moment attenuation
  double epsilon_guard = 1e-8;     // delta: projection floor and denominator guard
  int starts = 10;                 // M
  double min_start_distance = 1.0; // d_min between initial points
  ObjectiveWeights weights{0.1, 1.0};
  std::int64_t max_iters = 100000;
  double q_round = 1e-3;           // reporting threshold for exact zeros
  std::uint64_t seed = 0;
};

void validate(const OptimizerConfig& cfg);

struct OptimizerState {
  Policy q;
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment, coordinatewise non-decreasing
  std::int64_t t = 0;
};

OptimizerState initial_state(const Policy& q0);

// One projected AMSGrad update. v_t takes the max of its history so the
// effective step size never grows; the iterate is clamped to
// [delta, 1-delta]^n afterwards.
OptimizerState adam_step(const OptimizerState& state,
                         std::span<const double> gradient,
                         const OptimizerConfig& cfg);

struct StartTrajectory {
  int start = 0;
  std::int64_t iterations = 0;
  double final_objective = 0.0;
  Policy final_q;
  bool converged = false;
  bool failed = false;
  std::string failure;
};

struct OptimizationResult {
  Policy q_star;
  double objective = 0.0;
  int best_start = -1;
  std::vector<StartTrajectory> starts;
  std::vector<std::string> warnings;
  int rounded_coordinates = 0;
};

struct StartSet {
  std::vector<Policy> points;
  double effective_d_min = 0.0;
  int relaxations = 0;
};

// M initial policies in [delta, 1-delta]^n with pairwise Euclidean distance
// >= d_min. When rejection sampling stalls, d_min halves until feasible.
StartSet sample_starts(int n, const OptimizerConfig& cfg);

struct IterationRecord {
  int start = 0;
  std::int64_t iteration = 0;
  double objective = 0.0;
  double step_norm = 0.0;
};

OptimizationResult optimize(const NetworkModel& model, const OptimizerConfig& cfg,
                            int threads = 0,
                            std::vector<IterationRecord>* trace = nullptr);
OptimizationResult optimize_serial(const NetworkModel& model,
                                   const OptimizerConfig& cfg,
                                   std::vector<IterationRecord>* trace = nullptr);

// Plain projected gradient descent with a fixed step, for convergence
// comparisons only.
OptimizationResult optimize_projected_gd(const NetworkModel& model,
                                         const OptimizerConfig& cfg,
                                         double step_size);

enum class BaselineKind { random, homogeneous_age, homogeneous_ee, homogeneous_pareto };

struct BaselineResult {
  Policy policy;
  analytic::MetricsReport metrics;
};

BaselineResult baseline(const NetworkModel& model, BaselineKind kind,
                        const ObjectiveWeights& weights, std::uint64_t seed);

const char* baseline_name(BaselineKind kind);

// Fraction of sensors whose transmission probability falls below `threshold`
// (the sensors that abstain from competing).
double contention_reduction(const Policy& policy, double threshold);

}  // namespace aoinet::mspadam

#endif  // AOINET_MSPADAM_HPP
