#include "aoinet/mspadam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoinet/errors.hpp"
#include "aoinet/gradient.hpp"
#include "aoinet/homogeneous.hpp"
#include "aoinet/rng.hpp"

namespace aoinet::mspadam {

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate > 0.0)) throw InvalidRange("learning rate must be positive");
  if (!(cfg.tolerance > 0.0)) throw InvalidRange("tolerance must be positive");
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0))
    throw InvalidRange("beta1 must lie in (0,1)");
  if (!(cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
    throw InvalidRange("beta2 must lie in (0,1)");
  if (!(cfg.epsilon_guard > 0.0 && cfg.epsilon_guard < 0.5))
    throw InvalidRange("epsilon guard must lie in (0, 0.5)");
  if (cfg.starts < 1) throw InvalidRange("need at least one start");
  if (cfg.min_start_distance < 0.0) throw InvalidRange("d_min must be >= 0");
  if (cfg.max_iters < 1) throw InvalidRange("max_iters must be >= 1");
  if (!(cfg.q_round >= 0.0 && cfg.q_round < 1.0))
    throw InvalidRange("q_round must lie in [0,1)");
  aoinet::validate(cfg.weights);
}

OptimizerState initial_state(const Policy& q0) {
  OptimizerState s;
  s.q = q0;
  s.m.assign(q0.size(), 0.0);
  s.v.assign(q0.size(), 0.0);
  s.t = 0;
  return s;
}

OptimizerState adam_step(const OptimizerState& state,
                         std::span<const double> gradient,
                         const OptimizerConfig& cfg) {
  const size_t n = state.q.size();
  if (gradient.size() != n) throw DimensionMismatch("gradient length != policy length");
  for (double g : gradient)
    if (!std::isfinite(g)) throw NonFiniteGradient("gradient has a non-finite entry");

  OptimizerState next = state;
  next.t = state.t + 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(next.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(next.t));
  const double lo = cfg.epsilon_guard;
  const double hi = 1.0 - cfg.epsilon_guard;
  for (size_t i = 0; i < n; ++i) {
    const double g = gradient[i];
    next.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    next.v[i] = std::max(state.v[i], cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g);
    const double m_hat = next.m[i] / bc1;
    const double v_hat = next.v[i] / bc2;
    const double q_raw = state.q[i] - cfg.learning_rate * m_hat /
                                          (std::sqrt(v_hat) + cfg.epsilon_guard);
    next.q[i] = std::clamp(q_raw, lo, hi);
  }
  return next;
}

StartSet sample_starts(int n, const OptimizerConfig& cfg) {
  validate(cfg);
  if (n < 1) throw InvalidRange("need at least one sensor");
  constexpr int kRetryCap = 1000;
  const double lo = cfg.epsilon_guard;
  const double hi = 1.0 - cfg.epsilon_guard;

  StartSet set;
  set.effective_d_min = cfg.min_start_distance;
  Rng rng(cfg.seed);
  Policy candidate(n);
  int rejections = 0;
  while (static_cast<int>(set.points.size()) < cfg.starts) {
    for (int i = 0; i < n; ++i) candidate[i] = rng.uniform(lo, hi);
    bool ok = true;
    for (const Policy& p : set.points) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = candidate[i] - p[i];
        d2 += d * d;
      }
      if (d2 < set.effective_d_min * set.effective_d_min) {
        ok = false;
        break;
      }
    }
    if (ok) {
      set.points.push_back(candidate);
      rejections = 0;
    } else if (++rejections >= kRetryCap) {
      set.effective_d_min *= 0.5;
      ++set.relaxations;
      rejections = 0;
    }
  }
  return set;
}

namespace {

struct StartOutcome {
  StartTrajectory traj;
  std::vector<IterationRecord> trace;
  bool zero_reset = false;
};

StartOutcome run_start(int index, const Policy& q0, const NetworkModel& model,
                       const OptimizerConfig& cfg, bool want_trace) {
  StartOutcome out;
  out.traj.start = index;
  OptimizerState state = initial_state(q0);
  try {
    for (std::int64_t it = 1; it <= cfg.max_iters; ++it) {
      const std::vector<double> g = gradient::d_objective_descent(
          state.q, model, cfg.weights, &out.zero_reset);
      OptimizerState next = adam_step(state, g, cfg);
      double step2 = 0.0;
      for (size_t i = 0; i < next.q.size(); ++i) {
        const double d = next.q[i] - state.q[i];
        step2 += d * d;
      }
      const double step_norm = std::sqrt(step2);
      state = std::move(next);
      out.traj.iterations = it;
      if (want_trace)
        out.trace.push_back({index, it,
                             analytic::objective(state.q, model, cfg.weights),
                             step_norm});
      if (step_norm <= cfg.tolerance) {
        out.traj.converged = true;
        break;
      }
    }
    out.traj.final_q = state.q;
    out.traj.final_objective = analytic::objective(state.q, model, cfg.weights);
    if (!std::isfinite(out.traj.final_objective)) {
      out.traj.failed = true;
      out.traj.failure = "non-finite objective at final iterate";
    }
  } catch (const NonFiniteGradient& e) {
    out.traj.failed = true;
    out.traj.failure = e.what();
    out.traj.final_q = state.q;
    out.traj.final_objective = std::numeric_limits<double>::infinity();
  }
  return out;
}

// Coordinates already below the reporting threshold are set to exact zero
// when that does not worsen the exactly-evaluated objective: all at once
// first, then one by one from the smallest.
void round_small_coordinates(Policy& q, double& objective,
                             const NetworkModel& model, const OptimizerConfig& cfg,
                             int& rounded) {
  rounded = 0;
  if (cfg.q_round <= 0.0) return;
  std::vector<int> small;
  for (size_t i = 0; i < q.size(); ++i)
    if (q[i] != 0.0 && q[i] < cfg.q_round) small.push_back(static_cast<int>(i));
  if (small.empty()) return;

  Policy all = q;
  for (int i : small) all[i] = 0.0;
  const double j_all = analytic::objective(all, model, cfg.weights);
  if (j_all <= objective) {
    q = std::move(all);
    objective = j_all;
    rounded = static_cast<int>(small.size());
    return;
  }
  std::sort(small.begin(), small.end(),
            [&](int a, int b) { return q[a] < q[b] || (q[a] == q[b] && a < b); });
  for (int i : small) {
    Policy trial = q;
    trial[i] = 0.0;
    const double j_trial = analytic::objective(trial, model, cfg.weights);
    if (j_trial <= objective) {
      q = std::move(trial);
      objective = j_trial;
      ++rounded;
    }
  }
}

OptimizationResult assemble(std::vector<StartOutcome>&& outcomes,
                            const StartSet& starts, const NetworkModel& model,
                            const OptimizerConfig& cfg,
                            std::vector<IterationRecord>* trace) {
  OptimizationResult result;
  if (starts.relaxations > 0)
    result.warnings.push_back(
        "start dispersion d_min relaxed " + std::to_string(starts.relaxations) +
        " time(s) to " + std::to_string(starts.effective_d_min));

  for (StartOutcome& out : outcomes) {
    if (out.zero_reset)
      result.warnings.push_back(
          "start " + std::to_string(out.traj.start) +
          ": zero reset probability; AoI term held constant there");
    if (trace)
      trace->insert(trace->end(), out.trace.begin(), out.trace.end());
    result.starts.push_back(std::move(out.traj));
  }

  for (const StartTrajectory& t : result.starts) {
    if (t.failed) continue;
    if (result.best_start < 0 ||
        t.final_objective < result.starts[result.best_start].final_objective)
      result.best_start = t.start;
  }
  if (result.best_start < 0)
    throw AllStartsFailed("every optimizer start produced non-finite values");

  result.q_star = result.starts[result.best_start].final_q;
  result.objective = result.starts[result.best_start].final_objective;
  round_small_coordinates(result.q_star, result.objective, model, cfg,
                          result.rounded_coordinates);
  return result;
}

}  // namespace

OptimizationResult optimize(const NetworkModel& model, const OptimizerConfig& cfg,
                            int threads, std::vector<IterationRecord>* trace) {
  aoinet::validate(model);
  validate(cfg);
  const StartSet starts = sample_starts(model.n, cfg);
  std::vector<StartOutcome> outcomes(cfg.starts);
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
#endif
  for (int l = 0; l < cfg.starts; ++l)
    outcomes[l] = run_start(l, starts.points[l], model, cfg, trace != nullptr);
  return assemble(std::move(outcomes), starts, model, cfg, trace);
}

OptimizationResult optimize_serial(const NetworkModel& model,
                                   const OptimizerConfig& cfg,
                                   std::vector<IterationRecord>* trace) {
  aoinet::validate(model);
  validate(cfg);
  const StartSet starts = sample_starts(model.n, cfg);
  std::vector<StartOutcome> outcomes(cfg.starts);
  for (int l = 0; l < cfg.starts; ++l)
    outcomes[l] = run_start(l, starts.points[l], model, cfg, trace != nullptr);
  return assemble(std::move(outcomes), starts, model, cfg, trace);
}

OptimizationResult optimize_projected_gd(const NetworkModel& model,
                                         const OptimizerConfig& cfg,
                                         double step_size) {
  aoinet::validate(model);
  validate(cfg);
  if (!(step_size > 0.0)) throw InvalidRange("step size must be positive");
  const StartSet starts = sample_starts(model.n, cfg);
  std::vector<StartOutcome> outcomes(cfg.starts);
  const double lo = cfg.epsilon_guard;
  const double hi = 1.0 - cfg.epsilon_guard;
  for (int l = 0; l < cfg.starts; ++l) {
    StartOutcome& out = outcomes[l];
    out.traj.start = l;
    Policy q = starts.points[l];
    try {
      for (std::int64_t it = 1; it <= cfg.max_iters; ++it) {
        const std::vector<double> g =
            gradient::d_objective_descent(q, model, cfg.weights, &out.zero_reset);
        double step2 = 0.0;
        for (size_t i = 0; i < q.size(); ++i) {
          if (!std::isfinite(g[i])) throw NonFiniteGradient("non-finite gradient");
          const double next = std::clamp(q[i] - step_size * g[i], lo, hi);
          const double d = next - q[i];
          step2 += d * d;
          q[i] = next;
        }
        out.traj.iterations = it;
        if (std::sqrt(step2) <= cfg.tolerance) {
          out.traj.converged = true;
          break;
        }
      }
      out.traj.final_q = q;
      out.traj.final_objective = analytic::objective(q, model, cfg.weights);
    } catch (const NonFiniteGradient& e) {
      out.traj.failed = true;
      out.traj.failure = e.what();
      out.traj.final_q = q;
      out.traj.final_objective = std::numeric_limits<double>::infinity();
    }
  }
  return assemble(std::move(outcomes), starts, model, cfg, nullptr);
}

const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::random: return "random";
    case BaselineKind::homogeneous_age: return "homogeneous_age";
    case BaselineKind::homogeneous_ee: return "homogeneous_ee";
    case BaselineKind::homogeneous_pareto: return "homogeneous_pareto";
  }
  return "?";
}

BaselineResult baseline(const NetworkModel& model, BaselineKind kind,
                        const ObjectiveWeights& weights, std::uint64_t seed) {
  aoinet::validate(model);
  BaselineResult result;
  switch (kind) {
    case BaselineKind::random: {
      Rng rng(seed);
      result.policy.resize(model.n);
      for (int i = 0; i < model.n; ++i) result.policy[i] = rng.uniform01();
      break;
    }
    case BaselineKind::homogeneous_age:
      result.policy = broadcast_policy(model.n, homo::age_optimal_q(model.n));
      break;
    case BaselineKind::homogeneous_ee:
      result.policy =
          broadcast_policy(model.n, homo::energy_optimal_q(model.n, model.power));
      break;
    case BaselineKind::homogeneous_pareto:
      result.policy =
          broadcast_policy(model.n, homo::pareto_search(model, weights).q_star);
      break;
  }
  result.metrics = analytic::evaluate(result.policy, model, weights);
  return result;
}

double contention_reduction(const Policy& policy, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InvalidRange("threshold must lie in (0,1)");
  if (policy.empty()) throw InvalidRange("empty policy");
  int below = 0;
  for (double q : policy)
    if (q < threshold) ++below;
  return static_cast<double>(below) / static_cast<double>(policy.size());
}

}  // namespace aoinet::mspadam
