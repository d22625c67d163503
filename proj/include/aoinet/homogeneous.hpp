#ifndef AOINET_HOMOGENEOUS_HPP
#define AOINET_HOMOGENEOUS_HPP

#include <vector>

#include "aoinet/model.hpp"

namespace aoinet::homo {

// Exact network metrics when every sensor uses the same transmission
// probability. O(n) per point given the correlation column sums.
class Evaluator {
 public:
  explicit Evaluator(const NetworkModel& model);

  double network_aoi(double q) const;
  double network_ee(double q) const;
  double objective(double q, const ObjectiveWeights& weights) const;

  int sensors() const { return n_; }

 private:
  int n_;
  int cap_;
  PowerProfile power_;
  std::vector<double> colsum_;
  double colsum_total_;
};

enum class SolutionKind { age_optimal, energy_optimal, pareto };

struct HomogeneousSolution {
  double q_star = 0.0;
  double aoi_at_q = 0.0;        // exact network AoI at q_star
  double ee_at_q = 0.0;         // exact network energy efficiency at q_star
  double objective_at_q = 0.0;  // NaN when no weights apply
  SolutionKind kind = SolutionKind::age_optimal;
  bool power_ratio_limit = false;  // energy optimum fell back to 1/n (P_T == P_I)
  // pareto only
  double interval_lo = 0.0;  // q_E*
  double interval_hi = 0.0;  // q_A*
  int candidates = 0;
};

// q_A* = 1/n; metrics evaluated with the exact forms at that point.
HomogeneousSolution age_optimal(const NetworkModel& model);

// Closed-form q_E*; exact metrics at that point. Falls back to the
// P_T -> P_I expansion limit 1/n with power_ratio_limit set.
HomogeneousSolution energy_optimal(const NetworkModel& model);

double age_optimal_q(int n);
double energy_optimal_q(int n, const PowerProfile& power);

// Bounded exhaustive search over [q_E*, q_A*] with the given step; evaluates
// J exactly at each candidate and breaks ties toward smaller q.
HomogeneousSolution pareto_search(const NetworkModel& model,
                                  const ObjectiveWeights& weights,
                                  double step = 1e-4, int threads = 0);

struct SweepRow {
  double q = 0.0;
  double network_aoi = 0.0;
  double network_ee = 0.0;
  double objective = 0.0;

  bool operator==(const SweepRow& other) const = default;
};

// Exact metrics at each candidate q; the OpenMP kernel and its serial
// reference produce identical rows.
std::vector<SweepRow> evaluate_grid(const NetworkModel& model,
                                    const ObjectiveWeights& weights,
                                    const std::vector<double>& qs,
                                    int threads = 0);
std::vector<SweepRow> evaluate_grid_serial(const NetworkModel& model,
                                           const ObjectiveWeights& weights,
                                           const std::vector<double>& qs);

std::vector<SweepRow> sweep(const NetworkModel& model,
                            const ObjectiveWeights& weights, double q_min,
                            double q_max, int points, int threads = 0);

std::vector<double> uniform_grid(double lo, double hi, double step);

// Grid oracles over [0, 1]; ties toward smaller q.
double grid_argmin_aoi(const NetworkModel& model, double step, int threads = 0);
double grid_argmax_ee(const NetworkModel& model, double step, int threads = 0);
double grid_argmin_objective(const NetworkModel& model,
                             const ObjectiveWeights& weights, double step,
                             int threads = 0);

}  // namespace aoinet::homo

#endif  // AOINET_HOMOGENEOUS_HPP
