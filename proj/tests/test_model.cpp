#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "aoinet/errors.hpp"
#include "aoinet/model.hpp"

using namespace aoinet;

namespace {

NetworkModel small_model(int n, CorrelationMatrix c) {
  NetworkModel m;
  m.n = n;
  m.aoi_cap = 20;
  m.correlation = std::move(c);
  m.power = {100.0, 1.0, 1e6};
  return m;
}

}  // namespace

TEST_CASE("validate accepts a well-formed model and policy") {
  const NetworkModel m = small_model(2, CorrelationMatrix::identity(2));
  CHECK_NOTHROW(validate(m, Policy{0.5, 0.5}));
}

TEST_CASE("validate reports the offending correlation entry") {
  CorrelationMatrix c = CorrelationMatrix::identity(2);
  c(0, 1) = 1.2;
  const NetworkModel m = small_model(2, c);
  try {
    validate(m, Policy{0.5, 0.5});
    FAIL("expected OutOfRangeEntry");
  } catch (const OutOfRangeEntry& e) {
    CHECK(e.row == 0);
    CHECK(e.col == 1);
    CHECK(e.value == doctest::Approx(1.2));
  }
}

TEST_CASE("validate rejects mismatched policy length") {
  const NetworkModel m = small_model(2, CorrelationMatrix::identity(2));
  CHECK_THROWS_AS(validate(m, Policy{0.1, 0.1, 0.1}), DimensionMismatch);
}

TEST_CASE("validate rejects bad policy entries and power profiles") {
  NetworkModel m = small_model(2, CorrelationMatrix::identity(2));
  CHECK_THROWS_AS(validate(m, Policy{-0.1, 0.5}), OutOfRangeEntry);
  CHECK_THROWS_AS(validate(m, Policy{0.5, 1.5}), OutOfRangeEntry);

  m.power.idle = 0.0;
  CHECK_THROWS_AS(validate(m), InvalidRange);
  m.power = {1.0, 2.0, 1e6};  // transmit below idle
  CHECK_THROWS_AS(validate(m), InvalidRange);
  m.power = {100.0, 1.0, 0.0};
  CHECK_THROWS_AS(validate(m), InvalidRange);
  m.power = {100.0, 1.0, 1e6};
  m.aoi_cap = 0;
  CHECK_THROWS_AS(validate(m), InvalidRange);
}

TEST_CASE("weights must be non-negative and not both zero") {
  CHECK_NOTHROW(validate(ObjectiveWeights{0.1, 1.0}));
  CHECK_NOTHROW(validate(ObjectiveWeights{1.0, 0.0}));
  CHECK_THROWS_AS(validate(ObjectiveWeights{0.0, 0.0}), InvalidRange);
  CHECK_THROWS_AS(validate(ObjectiveWeights{-0.1, 1.0}), InvalidRange);
}

TEST_CASE("degenerate range collapses to the identity matrix") {
  const CorrelationMatrix c = generate_correlation({3, 1.0, 0.0, 0.0, 1.0, 42});
  CHECK(c == CorrelationMatrix::identity(3));
}

TEST_CASE("generation is a pure function of its arguments") {
  const CorrelationGenSpec spec{10, 1.0, 0.2, 0.2, 0.5, 1};
  const CorrelationMatrix a = generate_correlation(spec);
  const CorrelationMatrix b = generate_correlation(spec);
  CHECK(a == b);  // bit-exact

  int nonzero = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      if (i == j) {
        CHECK(a(i, j) == 1.0);
      } else if (a(i, j) != 0.0) {
        CHECK(a(i, j) == 0.2);  // constant range, exact value
        ++nonzero;
      }
    }
  CHECK(nonzero > 0);
  CHECK(nonzero < 90);

  CorrelationGenSpec other = spec;
  other.seed = 2;
  CHECK(generate_correlation(other) != a);
}

TEST_CASE("off-diagonal fill fraction tracks density") {
  const int n = 100;
  const double density = 0.3;
  const CorrelationMatrix c = generate_correlation({n, 1.0, 0.1, 0.9, density, 7});
  int nonzero = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && c(i, j) != 0.0) ++nonzero;
  const double cells = n * (n - 1);
  const double sigma = std::sqrt(cells * density * (1.0 - density));
  CHECK(std::abs(nonzero - cells * density) <= 3.0 * sigma);
}

TEST_CASE("generation rejects invalid parameters") {
  CHECK_THROWS_AS(generate_correlation({3, 1.0, 0.5, 0.3, 1.0, 0}), InvalidRange);
  CHECK_THROWS_AS(generate_correlation({3, 1.0, 0.0, 1.5, 1.0, 0}), InvalidRange);
  CHECK_THROWS_AS(generate_correlation({3, 1.2, 0.0, 0.5, 1.0, 0}), InvalidRange);
  CHECK_THROWS_AS(generate_correlation({0, 1.0, 0.0, 0.5, 1.0, 0}), InvalidRange);
}

TEST_CASE("plain-text matrix round-trip is exact") {
  const CorrelationMatrix c = generate_correlation({6, 0.9, 0.05, 0.63, 0.8, 11});
  std::stringstream buf;
  write_correlation(c, buf);
  const CorrelationMatrix back = read_correlation(buf);
  CHECK(back == c);
}

TEST_CASE("matrix reader rejects ragged and malformed input") {
  std::stringstream ragged("1 0\n0 1 0\n");
  CHECK_THROWS_AS(read_correlation(ragged), DimensionMismatch);
  std::stringstream junk("1 x\n0 1\n");
  CHECK_THROWS_AS(read_correlation(junk), InvalidRange);
  std::stringstream outside("1 2\n0 1\n");
  CHECK_THROWS_AS(read_correlation(outside), OutOfRangeEntry);
}

TEST_CASE("column sums aggregate incoming overlap") {
  CorrelationMatrix c = CorrelationMatrix::identity(2);
  c(1, 0) = 0.5;
  const std::vector<double> s = c.column_sums();
  CHECK(s[0] == doctest::Approx(1.5));
  CHECK(s[1] == doctest::Approx(1.0));
}
