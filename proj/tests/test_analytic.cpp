#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aoinet/analytic.hpp"
#include "aoinet/errors.hpp"
#include "aoinet/model.hpp"
#include "aoinet/rng.hpp"

using namespace aoinet;
using namespace aoinet::analytic;

namespace {

NetworkModel make_model(int n, CorrelationMatrix c, int cap = 20,
                        PowerProfile power = {100.0, 1.0, 1e6}) {
  NetworkModel m;
  m.n = n;
  m.aoi_cap = cap;
  m.correlation = std::move(c);
  m.power = power;
  return m;
}

NetworkModel random_model(int n, Rng& rng, int cap = 20) {
  CorrelationMatrix c = CorrelationMatrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c(i, j) = rng.uniform(0.0, 1.0);
  return make_model(n, std::move(c), cap);
}

Policy random_policy(int n, Rng& rng, double lo = 0.05, double hi = 0.5) {
  Policy q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.uniform(lo, hi);
  return q;
}

}  // namespace

TEST_CASE("success probabilities follow the leave-one-out product") {
  CHECK(success_probs({0.3}) == std::vector<double>{1.0});

  const std::vector<double> p2 = success_probs({0.5, 0.5});
  CHECK(p2[0] == doctest::Approx(0.5));
  CHECK(p2[1] == doctest::Approx(0.5));

  const std::vector<double> p3 = success_probs({0.1, 0.2, 0.3});
  CHECK(p3[0] == doctest::Approx(0.56).epsilon(1e-12));
  CHECK(p3[1] == doctest::Approx(0.63).epsilon(1e-12));
  CHECK(p3[2] == doctest::Approx(0.72).epsilon(1e-12));
}

TEST_CASE("success probabilities stay finite when some q hits 1") {
  const std::vector<double> p = success_probs({1.0, 0.25});
  CHECK(p[0] == doctest::Approx(0.75));
  CHECK(p[1] == 0.0);
}

TEST_CASE("reset probabilities weight deliveries by incoming overlap") {
  const std::vector<double> r =
      reset_probs({0.5, 0.5}, CorrelationMatrix::identity(2));
  CHECK(r[0] == doctest::Approx(0.25));
  CHECK(r[1] == doctest::Approx(0.25));

  CorrelationMatrix c = CorrelationMatrix::identity(2);
  c(1, 0) = 1.0;  // sensor 2's updates always carry sensor 1's state
  const std::vector<double> r2 = reset_probs({0.5, 0.5}, c);
  CHECK(r2[0] == doctest::Approx(0.5));
  CHECK(r2[1] == doctest::Approx(0.25));

  CHECK(reset_probs({0.0, 0.0}, c) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("steady state matches the geometric form") {
  const SteadyStateDist d = steady_state(0.5, 3);
  CHECK(d.probs[0] == doctest::Approx(0.5));
  CHECK(d.probs[1] == doctest::Approx(0.25));
  CHECK(d.probs[2] == doctest::Approx(0.25));

  const SteadyStateDist always = steady_state(1.0, 5);
  CHECK(always.probs[0] == 1.0);
  for (int k = 1; k < 5; ++k) CHECK(always.probs[k] == 0.0);

  CHECK_THROWS_AS(steady_state(0.0, 5), DegenerateChain);
}

TEST_CASE("steady state normalizes over the full parameter grid") {
  for (int cap : {1, 2, 5, 20, 100}) {
    for (int pi = 1; pi <= 99; ++pi) {
      const double p = pi / 100.0;
      const SteadyStateDist d = steady_state(p, cap);
      double sum = 0.0;
      for (double x : d.probs) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("mean AoI equals the distribution mean") {
  for (int cap : {1, 2, 5, 20, 100}) {
    for (int pi = 1; pi <= 99; ++pi) {
      const double p = pi / 100.0;
      const SteadyStateDist d = steady_state(p, cap);
      double mean = 0.0;
      for (int k = 0; k < cap; ++k) mean += (k + 1) * d.probs[k];
      CHECK(mean_aoi(p, cap) == doctest::Approx(mean).epsilon(1e-10));
    }
  }
}

TEST_CASE("mean AoI closed form and limits") {
  CHECK(mean_aoi(1.0, 7) == doctest::Approx(1.0));
  CHECK(mean_aoi(0.5, 2) == doctest::Approx(1.5));
  CHECK(mean_aoi(1e-13, 20) == 20.0);
  CHECK(mean_aoi(0.0, 20) == 20.0);
}

TEST_CASE("mean AoI decreases strictly in the reset probability") {
  for (int cap : {2, 5, 20, 100}) {
    double prev = mean_aoi(0.01, cap);
    for (int pi = 2; pi <= 100; ++pi) {
      const double cur = mean_aoi(pi / 100.0, cap);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("mean AoI stays within [1, cap]") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int cap = 1 + static_cast<int>(rng.uniform(0.0, 50.0));
    const double v = mean_aoi(rng.uniform01(), cap);
    CHECK(v >= 1.0 - 1e-12);
    CHECK(v <= cap + 1e-12);
  }
}

TEST_CASE("network AoI sums exact per-sensor means") {
  const NetworkModel m = make_model(2, CorrelationMatrix::identity(2), 2);
  CHECK(network_aoi({0.5, 0.5}, m) == doctest::Approx(3.5).epsilon(1e-12));

  const NetworkModel m20 = make_model(2, CorrelationMatrix::identity(2), 20);
  CHECK(network_aoi({0.0, 0.0}, m20) == doctest::Approx(40.0));
}

TEST_CASE("lifetime throughput follows the lifetime-times-rate form") {
  const NetworkModel single =
      make_model(1, CorrelationMatrix::identity(1), 20, {100.0, 1.0, 100.0});
  const std::vector<double> u = lifetime_throughput({1.0}, single);
  CHECK(u[0] == doctest::Approx(1.0));

  const NetworkModel m = make_model(2, CorrelationMatrix::identity(2));
  const std::vector<double> u2 = lifetime_throughput({0.5, 0.5}, m);
  CHECK(u2[0] == doctest::Approx(1e6 * 0.25 / 50.5).epsilon(1e-12));

  CHECK(lifetime_throughput({0.0, 0.0}, m) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("energy efficiency is lifetime throughput per unit energy") {
  const NetworkModel m = make_model(2, CorrelationMatrix::identity(2));
  const EnergyEfficiency ee = energy_efficiency({0.5, 0.5}, m);
  CHECK(ee.per_sensor[0] == doctest::Approx(4.9505e-3).epsilon(1e-4));

  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkModel rm = random_model(2 + trial % 6, rng);
    const Policy q = random_policy(rm.n, rng);
    const std::vector<double> u = lifetime_throughput(q, rm);
    const EnergyEfficiency e = energy_efficiency(q, rm);
    double net = 0.0;
    for (int i = 0; i < rm.n; ++i) {
      CHECK(e.per_sensor[i] == doctest::Approx(u[i] / rm.power.budget).epsilon(1e-12));
      net += e.per_sensor[i];
    }
    CHECK(e.network == doctest::Approx(net).epsilon(1e-12));
  }
}

TEST_CASE("objective reduces to its pure components") {
  Rng rng(23);
  const NetworkModel m = random_model(5, rng);
  const Policy q = random_policy(5, rng);
  CHECK(objective(q, m, {1.0, 0.0}) == doctest::Approx(network_aoi(q, m)));
  CHECK(objective(q, m, {0.0, 1.0}) ==
        doctest::Approx(-energy_efficiency(q, m).network));
}

TEST_CASE("extra correlation never hurts reset probability or AoI") {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 5;
    NetworkModel m = random_model(n, rng);
    const Policy q = random_policy(n, rng);
    const std::vector<double> before = reset_probs(q, m.correlation);

    const int i = static_cast<int>(rng.uniform(0.0, n));
    int j = static_cast<int>(rng.uniform(0.0, n));
    if (i == j) j = (j + 1) % n;
    NetworkModel boosted = m;
    boosted.correlation(j, i) = std::min(1.0, m.correlation(j, i) + 0.3);

    const std::vector<double> after = reset_probs(q, boosted.correlation);
    CHECK(after[i] >= before[i] - 1e-15);
    CHECK(mean_aoi(after[i], m.aoi_cap) <= mean_aoi(before[i], m.aoi_cap) + 1e-12);
  }
}

TEST_CASE("reports aggregate exactly and bound their fields") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkModel m = random_model(4 + trial % 5, rng);
    const Policy q = random_policy(m.n, rng, 0.0, 0.6);
    const MetricsReport rep = evaluate(q, m, {0.1, 1.0});
    double aoi = 0.0, ee = 0.0, u = 0.0;
    for (int i = 0; i < m.n; ++i) {
      CHECK(rep.success_probs[i] >= 0.0);
      CHECK(rep.success_probs[i] <= 1.0);
      CHECK(rep.reset_probs[i] >= 0.0);
      CHECK(rep.reset_probs[i] <= 1.0);
      CHECK(rep.sensor_aoi[i] >= 1.0 - 1e-12);
      CHECK(rep.sensor_aoi[i] <= m.aoi_cap + 1e-12);
      CHECK(rep.lifetime_throughput[i] >= 0.0);
      CHECK(rep.sensor_ee[i] >= 0.0);
      aoi += rep.sensor_aoi[i];
      ee += rep.sensor_ee[i];
      u += rep.lifetime_throughput[i];
    }
    CHECK(rep.network_aoi == aoi);
    CHECK(rep.network_ee == ee);
    CHECK(rep.network_throughput == u);
    CHECK(rep.objective == doctest::Approx(0.1 * aoi - ee).epsilon(1e-12));
  }
}

TEST_CASE("metrics CSV has one row per sensor plus a summary") {
  const NetworkModel m = make_model(3, CorrelationMatrix::identity(3));
  const Policy q{0.1, 0.2, 0.3};
  const MetricsReport rep = evaluate(q, m, {0.1, 1.0});
  std::ostringstream out;
  write_metrics_csv(rep, q, out);
  const std::string text = out.str();
  int lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 5);  // header + 3 sensors + network
  CHECK(text.find("sensor,q,") == 0);
  CHECK(text.find("network,") != std::string::npos);
}
