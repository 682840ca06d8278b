#pragma once

// Invariant-region-preserving limiter.
//
// Each cell polynomial is pulled toward its average,
//     w~(x) = theta * w(x) + (1 - theta) * avg,
// with theta = min(1, theta1, theta2),
//     theta1 = (r0 - r(avg)) / (r_max - r(avg)),
//     theta2 = (s(avg) - s0) / (s(avg) - s_min),
// where r_max / s_min are taken over the test-set points of the cell only.
// Convexity of r and concavity of s make the limited values lie in Sigma at
// those points; the average is untouched.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "irp/discretization.hpp"
#include "irp/model.hpp"

namespace irp {

/// Reference-cell abscissae at which membership is enforced. Sorted, unique, in [-1, 1].
class TestSet {
 public:
  TestSet() = default;
  TestSet(std::vector<double> abscissae, std::string provenance);

  static TestSet gauss_lobatto(int n);
  /// {-gamma_t, gamma_t}: interior pair of the second-order diffusive decomposition.
  static TestSet interior_pair(double gamma_t);
  /// {-1, gamma_t, 1}: three-point set of the third-order decompositions.
  static TestSet interior3(double gamma_t);
  static TestSet union_of(std::span<const TestSet> sets);

  std::span<const double> abscissae() const { return abscissae_; }
  std::size_t size() const { return abscissae_.size(); }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<double> abscissae_;
  std::string provenance_;
};

struct LimiterReport {
  double theta = 1.0;
  double theta1 = 1.0;
  double theta2 = 1.0;
  double r_max = 0.0;
  double s_min = 0.0;
  bool activated = false;
  std::size_t cell_index = 0;
};

/// theta for one cell given its point values on the test set.
LimiterReport compute_theta(std::span<const State> test_values, const State& cell_avg,
                            const InvariantRegion& region, std::size_t cell_index = 0);

LimiterReport compute_theta(const CellPolynomial& cell_poly, const State& cell_avg,
                            const InvariantRegion& region, const TestSet& test_set,
                            std::size_t cell_index = 0);

/// theta * poly + (1 - theta) * avg. Throws ThetaOutOfRange unless 0 <= theta <= 1.
CellPolynomial apply_limiter(const CellPolynomial& cell_poly, const State& cell_avg, double theta);

/// Limits every cell in place, returning reports in cell order.
std::vector<LimiterReport> limit_in_place(DGField& field, const InvariantRegion& region, const TestSet& test_set);

struct LimitedField {
  DGField field;
  std::vector<LimiterReport> reports;
};

LimitedField limit_field(const DGField& field, const InvariantRegion& region, const TestSet& test_set);
/// Per-cell test sets (one per cell).
LimitedField limit_field(const DGField& field, const InvariantRegion& region, std::span<const TestSet> test_sets);

/// 2 * max{1, (s(avg)-s0)/(r0-r(avg)), (r0-r(avg))/(s(avg)-s0)}.
double c4_diagnostic(const State& cell_avg, const InvariantRegion& region);

/// CSV: cell_index,theta,theta1,theta2,activated
void write_reports_csv(std::ostream& os, std::span<const LimiterReport> reports);

}  // namespace irp
