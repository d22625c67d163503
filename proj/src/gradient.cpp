#include "aoinet/gradient.hpp"

#include <cmath>
#include <string>

#include "aoinet/analytic.hpp"
#include "aoinet/errors.hpp"

namespace aoinet::gradient {

double aoi_reset_slope(double reset_prob, int aoi_cap) {
  if (aoi_cap <= 1) return 0.0;
  const double p = reset_prob;
  const double cap = static_cast<double>(aoi_cap);
  if (p * cap < 1e-3) {
    // mean AoI = sum_{k=0}^{cap-1} (1-p)^k, so the derivative is a plain
    // power sum with no cancellation.
    double sum = 0.0, pw = 1.0;
    for (int k = 1; k < aoi_cap; ++k) {
      sum += k * pw;
      pw *= 1.0 - p;
    }
    return -sum;
  }
  const double log_survive = std::log1p(-p);
  const double survive_cap_m1 = std::exp((cap - 1.0) * log_survive);
  const double one_minus_survive_cap = -std::expm1(cap * log_survive);
  return (cap * p * survive_cap_m1 - one_minus_survive_cap) / (p * p);
}

std::vector<double> d_reset_probs(const Policy& q, const CorrelationMatrix& c) {
  const int n = static_cast<int>(q.size());
  for (int s = 0; s < n; ++s)
    if (q[s] >= 1.0 - kBoundaryGuard)
      throw PolicyAtBoundary("q[" + std::to_string(s) +
                             "] too close to 1 for reset-probability gradient");

  const std::vector<double> p = analytic::success_probs(q);
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> prefix(n + 1), suffix(n + 1), acc(n);
  for (int s = 0; s < n; ++s) {
    // leave-two-out products T_{j,s} = prod_{k != j, k != s} (1 - q_k)
    prefix[0] = 1.0;
    for (int k = 0; k < n; ++k)
      prefix[k + 1] = prefix[k] * (k == s ? 1.0 : 1.0 - q[k]);
    suffix[n] = 1.0;
    for (int k = n - 1; k >= 0; --k)
      suffix[k] = suffix[k + 1] * (k == s ? 1.0 : 1.0 - q[k]);

    std::fill(acc.begin(), acc.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      if (j == s) continue;
      const double wj = q[j] * prefix[j] * suffix[j + 1];
      if (wj == 0.0) continue;
      for (int i = 0; i < n; ++i) acc[i] += wj * c(j, i);
    }
    for (int i = 0; i < n; ++i)
      m[static_cast<size_t>(i) * n + s] = p[s] * c(s, i) - acc[i];
  }
  return m;
}

namespace {

std::vector<double> aoi_gradient_from(const std::vector<double>& d_reset,
                                      const std::vector<double>& resets,
                                      const NetworkModel& model, bool relaxed,
                                      bool* hit_zero_reset) {
  const int n = model.n;
  std::vector<double> g(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (resets[i] == 0.0) {
      if (!relaxed)
        throw DegenerateReset("reset probability of sensor " +
                              std::to_string(i) + " is zero");
      if (hit_zero_reset) *hit_zero_reset = true;
      continue;
    }
    const double slope = aoi_reset_slope(resets[i], model.aoi_cap);
    for (int s = 0; s < n; ++s)
      g[s] += slope * d_reset[static_cast<size_t>(i) * n + s];
  }
  return g;
}

std::vector<double> ee_gradient_from(const std::vector<double>& d_reset,
                                     const std::vector<double>& resets,
                                     const Policy& q, const NetworkModel& model) {
  const int n = model.n;
  const double spread = model.power.transmit - model.power.idle;
  std::vector<double> denom(n);
  for (int i = 0; i < n; ++i) {
    denom[i] = model.power.idle + q[i] * spread;
    if (!(denom[i] > 0.0))
      throw DegenerateEnergy("per-slot energy draw is zero for sensor " +
                             std::to_string(i));
  }
  std::vector<double> g(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < n; ++s)
      g[s] += d_reset[static_cast<size_t>(i) * n + s] / denom[i];
  // i = s term of the quotient rule: the denominator varies with q_s as well
  for (int s = 0; s < n; ++s) g[s] -= resets[s] * spread / (denom[s] * denom[s]);
  return g;
}

}  // namespace

std::vector<double> d_network_aoi(const Policy& q, const NetworkModel& model) {
  const std::vector<double> m = d_reset_probs(q, model.correlation);
  const std::vector<double> r = analytic::reset_probs(q, model.correlation);
  return aoi_gradient_from(m, r, model, false, nullptr);
}

std::vector<double> d_energy_eff(const Policy& q, const NetworkModel& model) {
  const std::vector<double> m = d_reset_probs(q, model.correlation);
  const std::vector<double> r = analytic::reset_probs(q, model.correlation);
  return ee_gradient_from(m, r, q, model);
}

namespace {

std::vector<double> objective_gradient(const Policy& q, const NetworkModel& model,
                                       const ObjectiveWeights& w, bool relaxed,
                                       bool* hit_zero_reset) {
  const int n = model.n;
  const std::vector<double> m = d_reset_probs(q, model.correlation);
  const std::vector<double> r = analytic::reset_probs(q, model.correlation);
  const std::vector<double> ga = aoi_gradient_from(m, r, model, relaxed, hit_zero_reset);
  const std::vector<double> ge = ee_gradient_from(m, r, q, model);
  std::vector<double> g(n);
  for (int s = 0; s < n; ++s) g[s] = w.gamma1 * ga[s] - w.gamma2 * ge[s];
  return g;
}

}  // namespace

std::vector<double> d_objective(const Policy& q, const NetworkModel& model,
                                const ObjectiveWeights& weights) {
  return objective_gradient(q, model, weights, false, nullptr);
}

std::vector<double> d_objective_descent(const Policy& q, const NetworkModel& model,
                                        const ObjectiveWeights& weights,
                                        bool* hit_zero_reset) {
  return objective_gradient(q, model, weights, true, hit_zero_reset);
}

GradientReport full_report(const Policy& q, const NetworkModel& model,
                           const ObjectiveWeights& weights) {
  GradientReport rep;
  rep.n = model.n;
  rep.d_reset = d_reset_probs(q, model.correlation);
  const std::vector<double> r = analytic::reset_probs(q, model.correlation);
  rep.d_aoi = aoi_gradient_from(rep.d_reset, r, model, false, nullptr);
  rep.d_ee = ee_gradient_from(rep.d_reset, r, q, model);
  rep.d_objective.resize(model.n);
  for (int s = 0; s < model.n; ++s)
    rep.d_objective[s] = weights.gamma1 * rep.d_aoi[s] - weights.gamma2 * rep.d_ee[s];
  return rep;
}

std::vector<double> finite_diff(const std::function<double(const Policy&)>& fn,
                                const Policy& q, double h) {
  if (!(h > 0.0)) throw StepOutOfRange("finite-difference step must be positive");
  const int n = static_cast<int>(q.size());
  for (int s = 0; s < n; ++s)
    if (q[s] < h || q[s] > 1.0 - h)
      throw StepOutOfRange("policy coordinate " + std::to_string(s) +
                           " not interior to [h, 1-h]");
  std::vector<double> g(n);
  Policy probe = q;
  for (int s = 0; s < n; ++s) {
    probe[s] = q[s] + h;
    const double hi = fn(probe);
    probe[s] = q[s] - h;
    const double lo = fn(probe);
    probe[s] = q[s];
    g[s] = (hi - lo) / (2.0 * h);
  }
  return g;
}

}  // namespace aoinet::gradient
