#include "aoinet/simulator.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aoinet/errors.hpp"
#include "aoinet/rng.hpp"

namespace aoinet::sim {

namespace {

void check_config(const SimConfig& config) {
  validate(config.model, config.policy);
  if (config.horizon <= 0) throw InvalidRange("horizon must be positive");
  if (config.warmup < 0 || config.warmup >= config.horizon)
    throw InvalidRange("warmup must satisfy 0 <= warmup < horizon");
}

SimStats finalize(const SimConfig& config, std::vector<std::int64_t>&& aoi_sum,
                  std::vector<std::int64_t>&& hist_flat,
                  std::vector<std::int64_t>&& resets,
                  std::vector<std::int64_t>&& successes) {
  const int n = config.model.n;
  const int cap = config.model.aoi_cap;
  SimStats stats;
  stats.slots_simulated = config.horizon;
  stats.slots_counted = config.horizon - config.warmup;
  stats.aoi_histogram.resize(n);
  for (int i = 0; i < n; ++i)
    stats.aoi_histogram[i].assign(hist_flat.begin() + static_cast<size_t>(i) * cap,
                                  hist_flat.begin() + static_cast<size_t>(i + 1) * cap);
  stats.delivered_updates = std::move(resets);
  stats.tx_success = std::move(successes);
  stats.mean_aoi.resize(n);
  stats.reset_rate.resize(n);
  stats.empirical_ee.resize(n);
  const double counted = static_cast<double>(stats.slots_counted);
  for (int i = 0; i < n; ++i) {
    stats.mean_aoi[i] = static_cast<double>(aoi_sum[i]) / counted;
    stats.reset_rate[i] = static_cast<double>(stats.delivered_updates[i]) / counted;
    const double draw =
        config.model.power.idle +
        config.policy[i] * (config.model.power.transmit - config.model.power.idle);
    stats.empirical_ee[i] = stats.reset_rate[i] / draw;
  }
  return stats;
}

}  // namespace

SimStats simulate_reference(const SimConfig& config, SlotObserver* observer) {
  check_config(config);
  const int n = config.model.n;
  const int cap = config.model.aoi_cap;
  const Policy& q = config.policy;
  const CorrelationMatrix& c = config.model.correlation;

  Rng rng(config.seed);
  std::vector<std::int32_t> aoi(n, 1);
  std::vector<std::uint8_t> reset(n, 0);
  std::vector<int> txs;
  txs.reserve(n);

  std::vector<std::int64_t> aoi_sum(n, 0);
  std::vector<std::int64_t> hist(static_cast<size_t>(n) * cap, 0);
  std::vector<std::int64_t> resets(n, 0), successes(n, 0);

  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    // transmission attempts; a singleton transmitter delivers
    txs.clear();
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(q[i])) txs.push_back(i);
    const int success = (txs.size() == 1) ? txs[0] : -1;

    if (success >= 0) {
      for (int i = 0; i < n; ++i) {
        const double cji = c(success, i);
        reset[i] = (cji > 0.0 && rng.bernoulli(cji)) ? 1 : 0;
        aoi[i] = reset[i] ? 1 : std::min(aoi[i] + 1, cap);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        reset[i] = 0;
        aoi[i] = std::min(aoi[i] + 1, cap);
      }
    }

    if (t > config.warmup) {
      if (success >= 0) ++successes[success];
      for (int i = 0; i < n; ++i) {
        aoi_sum[i] += aoi[i];
        ++hist[static_cast<size_t>(i) * cap + aoi[i] - 1];
        resets[i] += reset[i];
      }
    }
    if (observer) observer->on_slot(t, txs, success, aoi, reset);
  }

  return finalize(config, std::move(aoi_sum), std::move(hist), std::move(resets),
                  std::move(successes));
}

SimStats simulate(const SimConfig& config, SlotObserver* observer) {
  if (observer) return simulate_reference(config, observer);
  check_config(config);
  const int n = config.model.n;
  const int cap = config.model.aoi_cap;
  const Policy& q = config.policy;
  const CorrelationMatrix& c = config.model.correlation;
  const std::int64_t horizon = config.horizon;
  const std::int64_t warmup = config.warmup;

  Rng rng(config.seed);
  std::vector<int> txs;
  txs.reserve(n);

  // Between resets the AoI is the deterministic ramp min(t - r + 1, cap)
  // from the last reset slot r, so each segment contributes an arithmetic
  // series to the mean and a value range to the histogram. Ramp histogram
  // counts go through a difference array, finalized below.
  std::vector<std::int64_t> last_reset(n, 0);
  std::vector<std::int64_t> aoi_sum(n, 0);
  std::vector<std::int64_t> hist_diff(static_cast<size_t>(n) * (cap + 1), 0);
  std::vector<std::int64_t> cap_extra(n, 0);
  std::vector<std::int64_t> resets(n, 0), successes(n, 0);

  const auto close_segment = [&](int i, std::int64_t r, std::int64_t next_r) {
    // slots s in [r, next_r - 1] carry value min(s - r + 1, cap); only
    // s in (warmup, horizon] count
    const std::int64_t a = std::max(r, warmup + 1);
    const std::int64_t b = std::min(next_r - 1, horizon);
    if (a > b) return;
    const std::int64_t cap_start = r + cap - 1;  // first slot at the cap
    const std::int64_t ramp_end = std::min(b, cap_start - 1);
    if (a <= ramp_end) {
      const std::int64_t v0 = a - r + 1;
      const std::int64_t v1 = ramp_end - r + 1;
      aoi_sum[i] += (v0 + v1) * (v1 - v0 + 1) / 2;
      hist_diff[static_cast<size_t>(i) * (cap + 1) + (v0 - 1)] += 1;
      hist_diff[static_cast<size_t>(i) * (cap + 1) + v1] -= 1;
    }
    const std::int64_t capped_from = std::max(a, cap_start);
    if (capped_from <= b) {
      const std::int64_t m = b - capped_from + 1;
      aoi_sum[i] += static_cast<std::int64_t>(cap) * m;
      cap_extra[i] += m;
    }
  };

  for (std::int64_t t = 1; t <= horizon; ++t) {
    txs.clear();
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(q[i])) txs.push_back(i);
    if (txs.size() != 1) continue;
    const int j = txs[0];
    if (t > warmup) ++successes[j];
    for (int i = 0; i < n; ++i) {
      const double cji = c(j, i);
      if (cji > 0.0 && rng.bernoulli(cji)) {
        close_segment(i, last_reset[i], t);
        last_reset[i] = t;
        if (t > warmup) ++resets[i];
      }
    }
  }
  for (int i = 0; i < n; ++i) close_segment(i, last_reset[i], horizon + 1);

  std::vector<std::int64_t> hist(static_cast<size_t>(n) * cap, 0);
  for (int i = 0; i < n; ++i) {
    std::int64_t running = 0;
    for (int k = 0; k < cap; ++k) {
      running += hist_diff[static_cast<size_t>(i) * (cap + 1) + k];
      hist[static_cast<size_t>(i) * cap + k] = running;
    }
    hist[static_cast<size_t>(i) * cap + (cap - 1)] += cap_extra[i];
  }

  return finalize(config, std::move(aoi_sum), std::move(hist), std::move(resets),
                  std::move(successes));
}

std::vector<double> empirical_energy_efficiency(const SimConfig& config) {
  return simulate(config).empirical_ee;
}

namespace {

void accumulate(const std::vector<std::vector<double>>& samples,
                std::vector<double>& mean, std::vector<double>& se) {
  const int reps = static_cast<int>(samples.size());
  const int n = static_cast<int>(samples[0].size());
  mean.assign(n, 0.0);
  se.assign(n, 0.0);
  for (const auto& s : samples)
    for (int i = 0; i < n; ++i) mean[i] += s[i];
  for (int i = 0; i < n; ++i) mean[i] /= reps;
  if (reps < 2) return;
  for (const auto& s : samples)
    for (int i = 0; i < n; ++i) {
      const double d = s[i] - mean[i];
      se[i] += d * d;
    }
  for (int i = 0; i < n; ++i)
    se[i] = std::sqrt(se[i] / (reps - 1)) / std::sqrt(static_cast<double>(reps));
}

ReplicateSummary summarize(const std::vector<SimStats>& runs) {
  const int reps = static_cast<int>(runs.size());
  const int n = static_cast<int>(runs[0].mean_aoi.size());
  std::vector<std::vector<double>> aoi(reps), rate(reps), del(reps), ee(reps);
  for (int r = 0; r < reps; ++r) {
    aoi[r] = runs[r].mean_aoi;
    rate[r] = runs[r].reset_rate;
    del[r].resize(n);
    for (int i = 0; i < n; ++i)
      del[r][i] = static_cast<double>(runs[r].delivered_updates[i]);
    ee[r] = runs[r].empirical_ee;
  }
  ReplicateSummary summary;
  summary.replications = reps;
  accumulate(aoi, summary.mean_aoi, summary.mean_aoi_se);
  accumulate(rate, summary.reset_rate, summary.reset_rate_se);
  accumulate(del, summary.delivered_updates, summary.delivered_updates_se);
  accumulate(ee, summary.empirical_ee, summary.empirical_ee_se);
  return summary;
}

}  // namespace

ReplicateSummary replicate(const SimConfig& config, int replications, int threads) {
  if (replications < 1) throw InvalidRange("replications must be >= 1");
  check_config(config);
  std::vector<SimStats> runs(replications);
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic)
#endif
  for (int r = 0; r < replications; ++r) {
    SimConfig run = config;
    run.seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
    runs[r] = simulate(run);
  }
  return summarize(runs);
}

ReplicateSummary replicate_serial(const SimConfig& config, int replications) {
  if (replications < 1) throw InvalidRange("replications must be >= 1");
  check_config(config);
  std::vector<SimStats> runs(replications);
  for (int r = 0; r < replications; ++r) {
    SimConfig run = config;
    run.seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
    runs[r] = simulate(run);
  }
  return summarize(runs);
}

}  // namespace aoinet::sim
