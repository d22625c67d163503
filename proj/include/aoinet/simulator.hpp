#ifndef AOINET_SIMULATOR_HPP
#define AOINET_SIMULATOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "aoinet/model.hpp"

namespace aoinet::sim {

struct SimConfig {
  NetworkModel model;
  Policy policy;
  std::int64_t horizon = 0;  // total slots simulated
  std::int64_t warmup = 1000;  // leading slots excluded from statistics
  std::uint64_t seed = 0;
};

struct SimStats {
  std::vector<double> mean_aoi;                       // per sensor, counted slots
  std::vector<std::vector<std::int64_t>> aoi_histogram;  // [sensor][k]: slots at AoI k+1
  std::vector<double> reset_rate;                     // resets per counted slot
  std::vector<std::int64_t> delivered_updates;        // AoI-reset events
  std::vector<std::int64_t> tx_success;               // own successful transmissions
  std::vector<double> empirical_ee;                   // reset rate / per-slot energy draw
  std::int64_t slots_simulated = 0;
  std::int64_t slots_counted = 0;

  bool operator==(const SimStats& other) const = default;
};

// Receives every slot (including warmup). `aoi` holds post-update values;
// `reset[i]` is nonzero when sensor i's AoI reset this slot. `success_sensor`
// is the transmitting sensor on a singleton slot, -1 otherwise.
class SlotObserver {
 public:
  virtual ~SlotObserver() = default;
  virtual void on_slot(std::int64_t slot, std::span<const int> transmitters,
                       int success_sensor, std::span<const std::int32_t> aoi,
                       std::span<const std::uint8_t> reset) = 0;
};

// Slot-level Monte Carlo of the correlated-Aloha AoI process. Per slot, each
// sensor transmits independently with its policy probability; a slot delivers
// iff exactly one sensor transmits; on sensor j's delivery every sensor i
// resets to AoI 1 independently with probability c(j,i), otherwise ages
// towards the cap. All sensors start at AoI 1.
//
// simulate() accumulates the deterministic AoI ramps between resets in closed
// form; simulate_reference() keeps the plain slot-by-slot loop. Both consume
// the RNG stream identically and return byte-identical statistics. An
// observer forces the reference path, which is the only one that has
// per-slot state to report.
SimStats simulate(const SimConfig& config, SlotObserver* observer = nullptr);
SimStats simulate_reference(const SimConfig& config,
                            SlotObserver* observer = nullptr);

// Delivered-update rate divided by the per-slot energy draw; the per-sensor
// lifetime is analytic (budget / draw), with all sensors active throughout.
std::vector<double> empirical_energy_efficiency(const SimConfig& config);

struct ReplicateSummary {
  int replications = 0;
  std::vector<double> mean_aoi;     // mean over replications
  std::vector<double> mean_aoi_se;  // standard error of the mean
  std::vector<double> reset_rate;
  std::vector<double> reset_rate_se;
  std::vector<double> delivered_updates;
  std::vector<double> delivered_updates_se;
  std::vector<double> empirical_ee;
  std::vector<double> empirical_ee_se;
};

// Independent replications with seeds derived from config.seed by replication
// index; merged in index order, so results do not depend on thread count.
ReplicateSummary replicate(const SimConfig& config, int replications,
                           int threads = 0);
ReplicateSummary replicate_serial(const SimConfig& config, int replications);

}  // namespace aoinet::sim

#endif  // AOINET_SIMULATOR_HPP
