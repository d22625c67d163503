#ifndef AOINET_GRADIENT_HPP
#define AOINET_GRADIENT_HPP

#include <functional>
#include <vector>

#include "aoinet/model.hpp"

namespace aoinet::gradient {

// Policies with any coordinate at or above 1 - kBoundaryGuard are rejected:
// the reset-probability derivative is singular at q_s = 1.
inline constexpr double kBoundaryGuard = 1e-12;

// d(mean AoI)/d(reset probability). Uses the geometric-series form of the
// derivative when cap * p is small, where the closed form cancels.
double aoi_reset_slope(double reset_prob, int aoi_cap);

// n x n row-major matrix; entry (i, s) = d p_i^r / d q_s. The (1 - q_s)
// division in the printed formula is folded into leave-two-out products
// prod_{k != j, k != s} (1 - q_k), which stay finite as q_s -> 1.
std::vector<double> d_reset_probs(const Policy& q, const CorrelationMatrix& c);

std::vector<double> d_network_aoi(const Policy& q, const NetworkModel& model);

std::vector<double> d_energy_eff(const Policy& q, const NetworkModel& model);

std::vector<double> d_objective(const Policy& q, const NetworkModel& model,
                                const ObjectiveWeights& weights);

// Variant for descent loops: sensors whose reset probability is exactly zero
// contribute 0 to the AoI gradient (their mean AoI sits at the cap for every
// policy, so the objective is locally constant in that term). Sets
// *hit_zero_reset when the convention was applied.
std::vector<double> d_objective_descent(const Policy& q, const NetworkModel& model,
                                        const ObjectiveWeights& weights,
                                        bool* hit_zero_reset = nullptr);

struct GradientReport {
  int n = 0;
  std::vector<double> d_reset;  // row-major n x n
  std::vector<double> d_aoi;
  std::vector<double> d_ee;
  std::vector<double> d_objective;
};

GradientReport full_report(const Policy& q, const NetworkModel& model,
                           const ObjectiveWeights& weights);

// Central differences (f(q + h e_s) - f(q - h e_s)) / 2h. The policy must be
// interior to [h, 1-h]^n; evaluations are never clamped.
std::vector<double> finite_diff(const std::function<double(const Policy&)>& fn,
                                const Policy& q, double h = 1e-6);

}  // namespace aoinet::gradient

#endif  // AOINET_GRADIENT_HPP
