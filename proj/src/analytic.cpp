#include "aoinet/analytic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "aoinet/errors.hpp"

namespace aoinet::analytic {

std::vector<double> success_probs(const Policy& q) {
  const int n = static_cast<int>(q.size());
  // prefix[i] = prod_{k < i} (1 - q_k), suffix[i] = prod_{k > i} (1 - q_k);
  // avoids dividing a full product by (1 - q_i), which fails at q_i = 1.
  std::vector<double> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * (1.0 - q[i]);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * (1.0 - q[i]);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = prefix[i] * suffix[i + 1];
  return p;
}

std::vector<double> reset_probs(const Policy& q, const CorrelationMatrix& c) {
  const int n = static_cast<int>(q.size());
  const std::vector<double> p = success_probs(q);
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = p[j] * q[j];
  std::vector<double> r(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double wj = w[j];
    if (wj == 0.0) continue;
    for (int i = 0; i < n; ++i) r[i] += wj * c(j, i);
  }
  return r;
}

SteadyStateDist steady_state(double reset_prob, int aoi_cap) {
  if (aoi_cap < 1) throw InvalidRange("aoi_cap must be >= 1");
  if (!(reset_prob > 0.0 && reset_prob <= 1.0))
    throw DegenerateChain(
        "steady_state requires reset probability in (0,1]; the chain has no "
        "stationary reset cycle at p^r = 0");
  SteadyStateDist d;
  d.probs.resize(aoi_cap);
  double tail = 1.0;  // (1 - p)^{k-1}
  for (int k = 1; k < aoi_cap; ++k) {
    d.probs[k - 1] = tail * reset_prob;
    tail *= 1.0 - reset_prob;
  }
  d.probs[aoi_cap - 1] = tail;
  return d;
}

double mean_aoi(double reset_prob, int aoi_cap) {
  if (aoi_cap < 1) throw InvalidRange("aoi_cap must be >= 1");
  if (!(reset_prob >= 0.0 && reset_prob <= 1.0))
    throw InvalidRange("reset probability outside [0,1]");
  if (reset_prob < kResetFloor) return static_cast<double>(aoi_cap);
  // (1-p)^cap via exp(cap*log1p(-p)) keeps precision for small p.
  const double log_survive = std::log1p(-reset_prob);
  return -std::expm1(static_cast<double>(aoi_cap) * log_survive) / reset_prob;
}

double network_aoi(const Policy& q, const NetworkModel& model) {
  const std::vector<double> r = reset_probs(q, model.correlation);
  double total = 0.0;
  for (double ri : r) total += mean_aoi(ri, model.aoi_cap);
  return total;
}

namespace {

double energy_per_slot(const PowerProfile& p, double qi) {
  return p.idle + qi * (p.transmit - p.idle);
}

}  // namespace

std::vector<double> lifetime_throughput(const Policy& q, const NetworkModel& model) {
  const std::vector<double> r = reset_probs(q, model.correlation);
  const int n = model.n;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    const double denom = energy_per_slot(model.power, q[i]);
    if (!(denom > 0.0))
      throw DegenerateEnergy("per-slot energy draw is zero for sensor " +
                             std::to_string(i));
    u[i] = model.power.budget * r[i] / denom;
  }
  return u;
}

EnergyEfficiency energy_efficiency(const Policy& q, const NetworkModel& model) {
  const std::vector<double> r = reset_probs(q, model.correlation);
  const int n = model.n;
  EnergyEfficiency ee;
  ee.per_sensor.resize(n);
  for (int i = 0; i < n; ++i) {
    const double denom = energy_per_slot(model.power, q[i]);
    if (!(denom > 0.0))
      throw DegenerateEnergy("per-slot energy draw is zero for sensor " +
                             std::to_string(i));
    ee.per_sensor[i] = r[i] / denom;
    ee.network += ee.per_sensor[i];
  }
  return ee;
}

double objective(const Policy& q, const NetworkModel& model,
                 const ObjectiveWeights& weights) {
  return weights.gamma1 * network_aoi(q, model) -
         weights.gamma2 * energy_efficiency(q, model).network;
}

MetricsReport evaluate(const Policy& q, const NetworkModel& model,
                       const ObjectiveWeights& weights) {
  MetricsReport rep;
  rep.success_probs = success_probs(q);
  rep.reset_probs = reset_probs(q, model.correlation);
  const int n = model.n;
  rep.sensor_aoi.resize(n);
  rep.lifetime_throughput.resize(n);
  rep.sensor_ee.resize(n);
  for (int i = 0; i < n; ++i) {
    rep.sensor_aoi[i] = mean_aoi(rep.reset_probs[i], model.aoi_cap);
    const double denom = energy_per_slot(model.power, q[i]);
    if (!(denom > 0.0))
      throw DegenerateEnergy("per-slot energy draw is zero for sensor " +
                             std::to_string(i));
    rep.sensor_ee[i] = rep.reset_probs[i] / denom;
    rep.lifetime_throughput[i] = model.power.budget * rep.sensor_ee[i];
    rep.network_aoi += rep.sensor_aoi[i];
    rep.network_throughput += rep.lifetime_throughput[i];
    rep.network_ee += rep.sensor_ee[i];
  }
  rep.objective = weights.gamma1 * rep.network_aoi - weights.gamma2 * rep.network_ee;
  return rep;
}

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_metrics_csv(const MetricsReport& r, const Policy& q, std::ostream& out) {
  out << "sensor,q,success_prob,reset_prob,mean_aoi,lifetime_throughput,"
         "energy_efficiency,objective\n";
  const int n = static_cast<int>(q.size());
  for (int i = 0; i < n; ++i) {
    out << i + 1 << ',' << g17(q[i]) << ',' << g17(r.success_probs[i]) << ','
        << g17(r.reset_probs[i]) << ',' << g17(r.sensor_aoi[i]) << ','
        << g17(r.lifetime_throughput[i]) << ',' << g17(r.sensor_ee[i]) << ",\n";
  }
  out << "network,,,," << g17(r.network_aoi) << ','
      << g17(r.network_throughput) << ',' << g17(r.network_ee) << ','
      << g17(r.objective) << '\n';
}

std::string metrics_text(const MetricsReport& r, const NetworkModel& model,
                         const ObjectiveWeights& weights) {
  std::ostringstream out;
  out << "network of " << model.n << " sensors, AoI cap " << model.aoi_cap
      << "\n"
      << "power: transmit " << g17(model.power.transmit) << ", idle "
      << g17(model.power.idle) << ", budget " << g17(model.power.budget)
      << "\n"
      << "weights: gamma1 " << g17(weights.gamma1) << ", gamma2 "
      << g17(weights.gamma2) << "\n"
      << "network average AoI:      " << g17(r.network_aoi) << " slots\n"
      << "network lifetime updates: " << g17(r.network_throughput) << "\n"
      << "network energy efficiency: " << g17(r.network_ee)
      << " packets/energy\n"
      << "objective J: " << g17(r.objective) << "\n";
  return out.str();
}

}  // namespace aoinet::analytic
