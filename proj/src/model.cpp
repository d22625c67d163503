#include "aoinet/model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aoinet/errors.hpp"
#include "aoinet/rng.hpp"

namespace aoinet {

CorrelationMatrix::CorrelationMatrix(int n, double diag)
    : n_(n), c_(static_cast<size_t>(n) * n, 0.0) {
  for (int i = 0; i < n; ++i) (*this)(i, i) = diag;
}

CorrelationMatrix CorrelationMatrix::constant(int n, double diag, double offdiag) {
  CorrelationMatrix m(n, diag);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m(i, j) = offdiag;
  return m;
}

std::vector<double> CorrelationMatrix::column_sums() const {
  std::vector<double> s(n_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) s[i] += (*this)(j, i);
  return s;
}

namespace {

void check_correlation(const CorrelationMatrix& c) {
  const int n = c.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = c(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << "correlation entry (" << i << "," << j << ") = " << v
            << " outside [0,1]";
        throw OutOfRangeEntry(i, j, v, msg.str());
      }
    }
  }
}

}  // namespace

void validate(const NetworkModel& model) {
  if (model.n <= 0) throw DimensionMismatch("sensor count must be positive");
  if (model.correlation.size() != model.n) {
    std::ostringstream msg;
    msg << "correlation matrix is " << model.correlation.size() << "x"
        << model.correlation.size() << " but model has n=" << model.n;
    throw DimensionMismatch(msg.str());
  }
  if (model.aoi_cap < 1) throw InvalidRange("aoi_cap must be >= 1");
  check_correlation(model.correlation);
  const PowerProfile& p = model.power;
  if (!(p.idle > 0.0))
    throw InvalidRange("idle power must be positive");
  if (!(p.transmit >= p.idle))
    throw InvalidRange("transmit power must be >= idle power");
  if (!(p.budget > 0.0))
    throw InvalidRange("energy budget must be positive");
}

void validate_policy_shape(int n, const Policy& policy) {
  if (static_cast<int>(policy.size()) != n) {
    std::ostringstream msg;
    msg << "policy has length " << policy.size() << " but model has n=" << n;
    throw DimensionMismatch(msg.str());
  }
  for (int i = 0; i < n; ++i) {
    const double q = policy[i];
    if (!(q >= 0.0 && q <= 1.0)) {
      std::ostringstream msg;
      msg << "transmission probability q[" << i << "] = " << q
          << " outside [0,1]";
      throw OutOfRangeEntry(i, -1, q, msg.str());
    }
  }
}

void validate(const NetworkModel& model, const Policy& policy) {
  validate(model);
  validate_policy_shape(model.n, policy);
}

void validate(const ObjectiveWeights& w) {
  if (!(w.gamma1 >= 0.0) || !(w.gamma2 >= 0.0))
    throw InvalidRange("objective weights must be non-negative");
  if (w.gamma1 == 0.0 && w.gamma2 == 0.0)
    throw InvalidRange("objective weights must not both be zero");
}

CorrelationMatrix generate_correlation(const CorrelationGenSpec& spec) {
  if (spec.n <= 0) throw InvalidRange("matrix size must be positive");
  if (!(spec.lo >= 0.0 && spec.lo <= spec.hi && spec.hi <= 1.0))
    throw InvalidRange("off-diagonal range must satisfy 0 <= lo <= hi <= 1");
  if (!(spec.diag >= 0.0 && spec.diag <= 1.0))
    throw InvalidRange("diagonal value must lie in [0,1]");
  if (!(spec.density >= 0.0 && spec.density <= 1.0))
    throw InvalidRange("density must lie in [0,1]");

  CorrelationMatrix m(spec.n, spec.diag);
  Rng rng(spec.seed);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(spec.density)) m(i, j) = rng.uniform(spec.lo, spec.hi);
    }
  }
  return m;
}

CorrelationMatrix read_correlation(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof())
      throw InvalidRange("correlation file: non-numeric token in row " +
                         std::to_string(rows.size() + 1));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw InvalidRange("correlation file: no rows");
  CorrelationMatrix m(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      std::ostringstream msg;
      msg << "correlation file: row " << i + 1 << " has " << rows[i].size()
          << " entries, expected " << n;
      throw DimensionMismatch(msg.str());
    }
    for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  check_correlation(m);
  return m;
}

CorrelationMatrix load_correlation(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidRange("cannot open correlation file: " + path);
  return read_correlation(f);
}

void write_correlation(const CorrelationMatrix& c, std::ostream& out) {
  const int n = c.size();
  char buf[32];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", c(i, j));
      out << buf << (j + 1 == n ? "" : " ");
    }
    out << '\n';
  }
}

void save_correlation(const CorrelationMatrix& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw InvalidRange("cannot open for writing: " + path);
  write_correlation(c, f);
}

Policy broadcast_policy(int n, double q) { return Policy(static_cast<size_t>(n), q); }

}  // namespace aoinet
