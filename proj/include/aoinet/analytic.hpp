#ifndef AOINET_ANALYTIC_HPP
#define AOINET_ANALYTIC_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "aoinet/model.hpp"

namespace aoinet::analytic {

// Reset probabilities below this threshold are treated as the p -> 0 limit.
inline constexpr double kResetFloor = 1e-12;

// p_i = prod_{k != i} (1 - q_k): probability that a transmission by sensor i
// sees a clear channel under the collision model.
std::vector<double> success_probs(const Policy& q);

// p_i^r = sum_j p_j q_j c_ji: per-slot probability that sensor i's AoI resets.
std::vector<double> reset_probs(const Policy& q, const CorrelationMatrix& c);

// Stationary AoI distribution of the per-sensor Markov chain.
// probs[k] is the probability of AoI value k+1; the cap absorbs the tail.
struct SteadyStateDist {
  std::vector<double> probs;
};

SteadyStateDist steady_state(double reset_prob, int aoi_cap);

// Long-term average AoI: (1 - (1-p)^cap) / p, continuous limit cap at p -> 0.
double mean_aoi(double reset_prob, int aoi_cap);

double network_aoi(const Policy& q, const NetworkModel& model);

// Expected deliveries of sensor i's state over its energy lifetime:
// U_i = E p_i^r / (P_I + q_i (P_T - P_I)).
std::vector<double> lifetime_throughput(const Policy& q, const NetworkModel& model);

struct EnergyEfficiency {
  std::vector<double> per_sensor;  // xi_i = U_i / E
  double network = 0.0;            // sum of per-sensor values
};

EnergyEfficiency energy_efficiency(const Policy& q, const NetworkModel& model);

// J = gamma1 * network AoI - gamma2 * network energy efficiency.
double objective(const Policy& q, const NetworkModel& model,
                 const ObjectiveWeights& weights);

struct MetricsReport {
  std::vector<double> success_probs;
  std::vector<double> reset_probs;
  std::vector<double> sensor_aoi;
  std::vector<double> lifetime_throughput;
  std::vector<double> sensor_ee;
  double network_aoi = 0.0;
  double network_throughput = 0.0;
  double network_ee = 0.0;
  double objective = 0.0;
};

MetricsReport evaluate(const Policy& q, const NetworkModel& model,
                       const ObjectiveWeights& weights);

// One row per sensor plus a final network summary row.
void write_metrics_csv(const MetricsReport& r, const Policy& q, std::ostream& out);
std::string metrics_text(const MetricsReport& r, const NetworkModel& model,
                         const ObjectiveWeights& weights);

}  // namespace aoinet::analytic

#endif  // AOINET_ANALYTIC_HPP
