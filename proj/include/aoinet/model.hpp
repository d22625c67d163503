#ifndef AOINET_MODEL_HPP
#define AOINET_MODEL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aoinet {

// Information-overlap matrix. Entry (i, j) is the probability that an update
// transmitted by sensor i also carries the current state of sensor j.
// Rows and columns are independent: no symmetry is assumed.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(int n, double diag = 1.0);

  static CorrelationMatrix identity(int n) { return CorrelationMatrix(n, 1.0); }
  static CorrelationMatrix constant(int n, double diag, double offdiag);

  int size() const { return n_; }
  double operator()(int i, int j) const { return c_[static_cast<size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return c_[static_cast<size_t>(i) * n_ + j]; }

  // s_i = sum_j c_ji: total overlap coverage of sensor i's state
  std::vector<double> column_sums() const;

  const std::vector<double>& data() const { return c_; }

  bool operator==(const CorrelationMatrix& other) const = default;

 private:
  int n_ = 0;
  std::vector<double> c_;  // row-major
};

// Per-slot power draw and the initial energy budget, all slot-normalized.
struct PowerProfile {
  double transmit = 1.0;  // P_T
  double idle = 1.0;      // P_I
  double budget = 1.0;    // E
};

struct NetworkModel {
  int n = 0;
  int aoi_cap = 1;  // maximum permissible AoI (slots)
  CorrelationMatrix correlation;
  PowerProfile power;
};

// Per-sensor transmission probabilities.
using Policy = std::vector<double>;

struct ObjectiveWeights {
  double gamma1 = 0.1;  // AoI weight, dimensionless
  double gamma2 = 1.0;  // energy-efficiency weight, energy per packet
};

// Throw DimensionMismatch / OutOfRangeEntry / InvalidRange when an invariant
// fails; return normally otherwise.
void validate(const NetworkModel& model);
void validate(const NetworkModel& model, const Policy& policy);
void validate(const ObjectiveWeights& weights);
void validate_policy_shape(int n, const Policy& policy);

struct CorrelationGenSpec {
  int n = 0;
  double diag = 1.0;
  double lo = 0.0;
  double hi = 0.0;
  double density = 1.0;  // probability an off-diagonal entry is drawn non-zero
  std::uint64_t seed = 0;
};

// Deterministic given the spec: diagonal fixed to `diag`, each off-diagonal
// entry (row-major order) kept with probability `density` and then drawn
// uniformly from [lo, hi].
CorrelationMatrix generate_correlation(const CorrelationGenSpec& spec);

// Plain-text matrix format: one row per line, space-separated decimals.
CorrelationMatrix read_correlation(std::istream& in);
CorrelationMatrix load_correlation(const std::string& path);
void write_correlation(const CorrelationMatrix& c, std::ostream& out);
void save_correlation(const CorrelationMatrix& c, const std::string& path);

Policy broadcast_policy(int n, double q);

}  // namespace aoinet

#endif  // AOINET_MODEL_HPP
