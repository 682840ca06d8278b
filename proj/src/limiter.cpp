#include "irp/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "irp/format.hpp"
#include "irp/kernels.hpp"
#include "irp/quadrature.hpp"

namespace irp {

TestSet::TestSet(std::vector<double> abscissae, std::string provenance)
    : abscissae_(std::move(abscissae)), provenance_(std::move(provenance)) {
  for (double x : abscissae_) {
    if (!(x >= -1.0 && x <= 1.0)) throw Error(ErrorCode::XiOutOfRange, "test abscissa " + std::to_string(x));
  }
  std::sort(abscissae_.begin(), abscissae_.end());
  abscissae_.erase(std::unique(abscissae_.begin(), abscissae_.end()), abscissae_.end());
  if (abscissae_.empty()) throw Error(ErrorCode::InvalidConfig, "empty test set");
}

TestSet TestSet::gauss_lobatto(int n) {
  return TestSet(irp::gauss_lobatto(n).nodes, "GaussLobatto(" + std::to_string(n) + ")");
}

TestSet TestSet::interior_pair(double gamma_t) {
  return TestSet({-gamma_t, gamma_t}, "Interior(" + fmt12(gamma_t) + ")");
}

TestSet TestSet::interior3(double gamma_t) {
  return TestSet({-1.0, gamma_t, 1.0}, "Interior3(" + fmt12(gamma_t) + ")");
}

TestSet TestSet::union_of(std::span<const TestSet> sets) {
  std::vector<double> all;
  std::string name = "Union(";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    all.insert(all.end(), sets[i].abscissae_.begin(), sets[i].abscissae_.end());
    name += (i ? "," : "") + sets[i].provenance_;
  }
  return TestSet(std::move(all), name + ")");
}

namespace {

// Scaling toward the average that keeps c1 of every value at least half of
// the average's c1. Invariants are undefined for c1 <= 0 (v -> 0 sends g to
// -infinity), so values there are first pulled back into the physical domain.
double physical_prescale(std::span<const State> values, const State& avg) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& w : values) lowest = std::min(lowest, w.c1);
  const double floor = 0.5 * avg.c1;
  if (lowest > 0.0 || !(avg.c1 > 0.0)) return 1.0;
  return (avg.c1 - floor) / (avg.c1 - lowest);
}

}  // namespace

LimiterReport compute_theta(std::span<const State> test_values, const State& cell_avg,
                            const InvariantRegion& region, std::size_t cell_index) {
  const auto [r_avg, s_avg] = riemann_invariants(region.law, cell_avg);
  if (r_avg > region.r0 + kMembershipSlack || s_avg < region.s0 - kMembershipSlack) {
    throw Error(ErrorCode::AverageOutsideInterior,
                "cell " + std::to_string(cell_index) + ": r(avg) - r0 = " + fmt12(r_avg - region.r0) +
                    ", s0 - s(avg) = " + fmt12(region.s0 - s_avg),
                cell_index);
  }

  const double prescale = physical_prescale(test_values, cell_avg);
  LimiterReport rep;
  rep.cell_index = cell_index;
  rep.r_max = -std::numeric_limits<double>::infinity();
  rep.s_min = std::numeric_limits<double>::infinity();
  for (const auto& w : test_values) {
    const State x = prescale < 1.0 ? prescale * w + (1.0 - prescale) * cell_avg : w;
    const auto [r, s] = riemann_invariants(region.law, x);
    rep.r_max = std::max(rep.r_max, r);
    rep.s_min = std::min(rep.s_min, s);
  }

  // Flat data (r_max <= r(avg)) needs no limiting and would make the ratio 0/0.
  if (rep.r_max > region.r0 && rep.r_max > r_avg) {
    rep.theta1 = std::max(0.0, region.r0 - r_avg) / (rep.r_max - r_avg);
  }
  if (rep.s_min < region.s0 && rep.s_min < s_avg) {
    rep.theta2 = std::max(0.0, s_avg - region.s0) / (s_avg - rep.s_min);
  }
  rep.theta = prescale * std::min({1.0, rep.theta1, rep.theta2});
  rep.activated = rep.theta < 1.0;
  return rep;
}

LimiterReport compute_theta(const CellPolynomial& cell_poly, const State& cell_avg,
                            const InvariantRegion& region, const TestSet& test_set, std::size_t cell_index) {
  std::vector<State> values;
  values.reserve(test_set.size());
  for (double xi : test_set.abscissae()) values.push_back(cell_poly.evaluate(xi));
  return compute_theta(values, cell_avg, region, cell_index);
}

CellPolynomial apply_limiter(const CellPolynomial& cell_poly, const State& cell_avg, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorCode::ThetaOutOfRange, "theta = " + fmt12(theta));
  CellPolynomial out = cell_poly;
  if (theta == 1.0) return out;
  out.c1[0] = theta * cell_poly.c1[0] + (1.0 - theta) * cell_avg.c1;
  out.c2[0] = theta * cell_poly.c2[0] + (1.0 - theta) * cell_avg.c2;
  for (std::size_t m = 1; m < out.c1.size(); ++m) {
    out.c1[m] *= theta;
    out.c2[m] *= theta;
  }
  return out;
}

std::vector<LimiterReport> limit_in_place(DGField& field, const InvariantRegion& region, const TestSet& test_set) {
  const std::size_t nm = field.n_modes();
  const std::size_t nq = test_set.size();
  const std::size_t n = field.n_cells();
  std::vector<LimiterReport> reports(n);
  if (nm == 1) {
    // Piecewise constants: every point value is the average.
    for (std::size_t j = 0; j < n; ++j) {
      const State avg = field.cell_average(j);
      const State pt[1] = {avg};
      reports[j] = compute_theta(pt, avg, region, j);
    }
    return reports;
  }

  std::vector<double> basis(nm * nq);
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t q = 0; q < nq; ++q) basis[m * nq + q] = legendre(static_cast<int>(m), test_set.abscissae()[q]);
  }
  std::vector<double> values(n * 2 * nq);
  kernels::eval_modal(field.coeffs(), nm, basis, nq, values);

  std::vector<double> theta(n);
  std::vector<State> pts(nq);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t q = 0; q < nq; ++q) pts[q] = {values[(2 * j) * nq + q], values[(2 * j + 1) * nq + q]};
    reports[j] = compute_theta(pts, field.cell_average(j), region, j);
    theta[j] = reports[j].theta;
  }
  kernels::scale_modes(field.coeffs(), nm, 2, theta);
  return reports;
}

LimitedField limit_field(const DGField& field, const InvariantRegion& region, const TestSet& test_set) {
  LimitedField out{field, {}};
  out.reports = limit_in_place(out.field, region, test_set);
  return out;
}

LimitedField limit_field(const DGField& field, const InvariantRegion& region, std::span<const TestSet> test_sets) {
  if (test_sets.size() != field.n_cells()) {
    throw Error(ErrorCode::InvalidConfig, "need one test set per cell");
  }
  LimitedField out{field, std::vector<LimiterReport>(field.n_cells())};
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    const CellPolynomial poly = field.cell(j);
    const State avg = field.cell_average(j);
    out.reports[j] = compute_theta(poly, avg, region, test_sets[j], j);
    out.field.set_cell(j, apply_limiter(poly, avg, out.reports[j].theta));
  }
  return out;
}

double c4_diagnostic(const State& cell_avg, const InvariantRegion& region) {
  const auto [dr, ds] = region.margins(cell_avg);
  if (!(dr > 0.0 && ds > 0.0)) {
    throw Error(ErrorCode::AverageOutsideInterior, "C4 needs an average strictly inside the region");
  }
  return 2.0 * std::max({1.0, ds / dr, dr / ds});
}

void write_reports_csv(std::ostream& os, std::span<const LimiterReport> reports) {
  os << "cell_index,theta,theta1,theta2,activated\n";
  for (const auto& r : reports) {
    os << r.cell_index << ',' << fmt12(r.theta) << ',' << fmt12(r.theta1) << ',' << fmt12(r.theta2) << ','
       << (r.activated ? 1 : 0) << '\n';
  }
}

}  // namespace irp
