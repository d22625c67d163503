#include "aoinet/homogeneous.hpp"

#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoinet/analytic.hpp"
#include "aoinet/errors.hpp"

namespace aoinet::homo {

Evaluator::Evaluator(const NetworkModel& model)
    : n_(model.n),
      cap_(model.aoi_cap),
      power_(model.power),
      colsum_(model.correlation.column_sums()),
      colsum_total_(0.0) {
  for (double s : colsum_) colsum_total_ += s;
}

double Evaluator::network_aoi(double q) const {
  const double pq = q * std::pow(1.0 - q, n_ - 1);
  double total = 0.0;
  for (double s : colsum_) total += analytic::mean_aoi(pq * s, cap_);
  return total;
}

double Evaluator::network_ee(double q) const {
  const double pq = q * std::pow(1.0 - q, n_ - 1);
  const double draw = power_.idle + q * (power_.transmit - power_.idle);
  return pq * colsum_total_ / draw;
}

double Evaluator::objective(double q, const ObjectiveWeights& w) const {
  return w.gamma1 * network_aoi(q) - w.gamma2 * network_ee(q);
}

double age_optimal_q(int n) { return 1.0 / static_cast<double>(n); }

double energy_optimal_q(int n, const PowerProfile& power) {
  const double ratio = power.transmit / power.idle;
  if (ratio == 1.0) return 1.0 / static_cast<double>(n);
  // q_E* = (sqrt(1 + 4(r-1)/n) - 1) / (2(r-1)), rewritten to avoid the
  // sqrt(1+x)-1 cancellation as r -> 1. The same form covers r < 1, where
  // it lands above 1/n and signals the misconfiguration downstream.
  const double x = 4.0 * (ratio - 1.0) / static_cast<double>(n);
  if (1.0 + x < 0.0) return 1.0;
  return 2.0 / (static_cast<double>(n) * (std::sqrt(1.0 + x) + 1.0));
}

HomogeneousSolution age_optimal(const NetworkModel& model) {
  validate(model);
  Evaluator eval(model);
  HomogeneousSolution sol;
  sol.kind = SolutionKind::age_optimal;
  sol.q_star = age_optimal_q(model.n);
  sol.aoi_at_q = eval.network_aoi(sol.q_star);
  sol.ee_at_q = eval.network_ee(sol.q_star);
  sol.objective_at_q = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

HomogeneousSolution energy_optimal(const NetworkModel& model) {
  validate(model);
  Evaluator eval(model);
  HomogeneousSolution sol;
  sol.kind = SolutionKind::energy_optimal;
  sol.q_star = energy_optimal_q(model.n, model.power);
  sol.power_ratio_limit = model.power.transmit <= model.power.idle;
  sol.aoi_at_q = eval.network_aoi(sol.q_star);
  sol.ee_at_q = eval.network_ee(sol.q_star);
  sol.objective_at_q = std::numeric_limits<double>::quiet_NaN();
  return sol;
}

std::vector<SweepRow> evaluate_grid_serial(const NetworkModel& model,
                                           const ObjectiveWeights& weights,
                                           const std::vector<double>& qs) {
  validate(model);
  validate(weights);
  Evaluator eval(model);
  std::vector<SweepRow> rows(qs.size());
  for (size_t k = 0; k < qs.size(); ++k) {
    SweepRow& r = rows[k];
    r.q = qs[k];
    r.network_aoi = eval.network_aoi(r.q);
    r.network_ee = eval.network_ee(r.q);
    r.objective = weights.gamma1 * r.network_aoi - weights.gamma2 * r.network_ee;
  }
  return rows;
}

std::vector<SweepRow> evaluate_grid(const NetworkModel& model,
                                    const ObjectiveWeights& weights,
                                    const std::vector<double>& qs, int threads) {
  validate(model);
  validate(weights);
  Evaluator eval(model);
  std::vector<SweepRow> rows(qs.size());
  const std::int64_t count = static_cast<std::int64_t>(qs.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
  for (std::int64_t k = 0; k < count; ++k) {
    SweepRow& r = rows[k];
    r.q = qs[k];
    r.network_aoi = eval.network_aoi(r.q);
    r.network_ee = eval.network_ee(r.q);
    r.objective = weights.gamma1 * r.network_aoi - weights.gamma2 * r.network_ee;
  }
  return rows;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InvalidRange("bad grid bounds/step");
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> qs(count);
  for (int k = 0; k < count; ++k) qs[k] = lo + k * step;
  return qs;
}

std::vector<SweepRow> sweep(const NetworkModel& model,
                            const ObjectiveWeights& weights, double q_min,
                            double q_max, int points, int threads) {
  if (points < 1) throw InvalidRange("sweep needs at least one point");
  if (!(q_min >= 0.0 && q_max <= 1.0 && q_min <= q_max))
    throw InvalidRange("sweep range must lie inside [0,1]");
  std::vector<double> qs(points);
  for (int k = 0; k < points; ++k)
    qs[k] = points == 1 ? q_min
                        : q_min + (q_max - q_min) * k / static_cast<double>(points - 1);
  return evaluate_grid(model, weights, qs, threads);
}

namespace {

// index of the smallest value, first occurrence winning ties
template <typename Proj>
size_t argmin_by(const std::vector<SweepRow>& rows, Proj proj) {
  size_t best = 0;
  for (size_t k = 1; k < rows.size(); ++k)
    if (proj(rows[k]) < proj(rows[best])) best = k;
  return best;
}

}  // namespace

HomogeneousSolution pareto_search(const NetworkModel& model,
                                  const ObjectiveWeights& weights, double step,
                                  int threads) {
  validate(weights);
  if (!(step > 0.0)) throw InvalidRange("search step must be positive");
  if (model.n < 1) throw DimensionMismatch("sensor count must be positive");
  const double q_lo = energy_optimal_q(model.n, model.power);
  const double q_hi = age_optimal_q(model.n);
  if (q_lo > q_hi + 1e-15)
    throw EmptyInterval("q_E* exceeds q_A*: transmit power below idle power");
  validate(model);

  const std::vector<double> qs = uniform_grid(q_lo, std::max(q_lo, q_hi), step);
  const std::vector<SweepRow> rows = evaluate_grid(model, weights, qs, threads);
  const size_t best = argmin_by(rows, [](const SweepRow& r) { return r.objective; });

  HomogeneousSolution sol;
  sol.kind = SolutionKind::pareto;
  sol.power_ratio_limit = model.power.transmit <= model.power.idle;
  sol.q_star = rows[best].q;
  sol.aoi_at_q = rows[best].network_aoi;
  sol.ee_at_q = rows[best].network_ee;
  sol.objective_at_q = rows[best].objective;
  sol.interval_lo = q_lo;
  sol.interval_hi = q_hi;
  sol.candidates = static_cast<int>(rows.size());
  return sol;
}

double grid_argmin_aoi(const NetworkModel& model, double step, int threads) {
  const std::vector<double> qs = uniform_grid(0.0, 1.0, step);
  const std::vector<SweepRow> rows =
      evaluate_grid(model, ObjectiveWeights{1.0, 0.0}, qs, threads);
  return rows[argmin_by(rows, [](const SweepRow& r) { return r.network_aoi; })].q;
}

double grid_argmax_ee(const NetworkModel& model, double step, int threads) {
  const std::vector<double> qs = uniform_grid(0.0, 1.0, step);
  const std::vector<SweepRow> rows =
      evaluate_grid(model, ObjectiveWeights{0.0, 1.0}, qs, threads);
  return rows[argmin_by(rows, [](const SweepRow& r) { return -r.network_ee; })].q;
}

double grid_argmin_objective(const NetworkModel& model,
                             const ObjectiveWeights& weights, double step,
                             int threads) {
  const std::vector<double> qs = uniform_grid(0.0, 1.0, step);
  const std::vector<SweepRow> rows = evaluate_grid(model, weights, qs, threads);
  return rows[argmin_by(rows, [](const SweepRow& r) { return r.objective; })].q;
}

}  // namespace aoinet::homo
