#include "irp/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "irp/format.hpp"
#include "irp/kernels.hpp"
#include "irp/quadrature.hpp"

namespace irp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCflSlack = 1e-12;

void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

}  // namespace

const char* to_string(CflMode mode) {
  switch (mode) {
    case CflMode::FirstOrder: return "first-order";
    case CflMode::HighOrderConvective: return "high-order";
    case CflMode::ViscousSecond: return "viscous-second";
    case CflMode::ViscousThird: return "viscous-third";
  }
  return "unknown";
}

const char* to_string(DtPolicy policy) {
  return policy == DtPolicy::TheoremBound ? "theorem" : "paper";
}

double SchemeConfig::effective_gamma_t() const {
  if (gamma_t) return *gamma_t;
  return degree == 2 ? 0.0 : 1.0;
}

void SchemeConfig::validate() const {
  if (degree < 0 || degree > 2) throw Error(ErrorCode::InvalidOrder, "degree must be 0, 1 or 2");
  if (!(flux.epsilon >= 0.0)) invalid("epsilon must be >= 0");
  const double g = effective_gamma_t();
  switch (cfl_mode) {
    case CflMode::FirstOrder:
      if (degree != 0) invalid("first-order mode needs degree 0");
      break;
    case CflMode::HighOrderConvective:
      if (degree < 1) invalid("high-order mode needs degree >= 1");
      if (flux.epsilon > 0.0 && dt_policy == DtPolicy::TheoremBound) {
        invalid("high-order convective certificate needs epsilon = 0; use a viscous mode");
      }
      break;
    case CflMode::ViscousSecond:
      if (degree != 1) invalid("viscous-second mode needs degree 1");
      if (flux.beta0 < 0.5) invalid("viscous-second mode needs beta0 >= 1/2");
      if (g == 0.0 || std::abs(g) > 1.0 || std::abs(1.0 - 1.0 / flux.beta0) > std::abs(g) + 1e-15) {
        invalid("gamma_t = " + fmt12(g) + " outside |1 - 1/beta0| <= |gamma_t| <= 1");
      }
      break;
    case CflMode::ViscousThird:
      if (degree != 2) invalid("viscous-third mode needs degree 2");
      if (flux.beta0 < 1.0) invalid("viscous-third mode needs beta0 >= 1");
      if (flux.beta1 < 0.125 || flux.beta1 > 0.25) invalid("viscous-third mode needs 1/8 <= beta1 <= 1/4");
      if (!(std::abs(g) < 1.0 / 3.0) || std::abs(g) > 8.0 * flux.beta1 - 1.0 + 1e-15) {
        invalid("gamma_t = " + fmt12(g) + " outside |gamma_t| < 1/3, |gamma_t| <= 8 beta1 - 1");
      }
      break;
  }
}

int lobatto_points(int degree) { return (degree + 4) / 2; }

TestSet test_set_for(const SchemeConfig& config) {
  switch (config.cfl_mode) {
    case CflMode::FirstOrder:
      return TestSet({0.0}, "CellAverage");
    case CflMode::HighOrderConvective:
      return TestSet::gauss_lobatto(lobatto_points(config.degree));
    case CflMode::ViscousSecond: {
      const TestSet parts[2] = {TestSet::gauss_lobatto(2), TestSet::interior_pair(std::abs(config.effective_gamma_t()))};
      return TestSet::union_of(parts);
    }
    case CflMode::ViscousThird:
      return TestSet::interior3(config.effective_gamma_t());
  }
  return TestSet::gauss_lobatto(2);
}

std::vector<State> fv1_step(std::span<const State> cells, const PressureLaw& law, const InvariantRegion& region,
                            double dt, double dx) {
  const std::size_t n = cells.size();
  if (n == 0) throw Error(ErrorCode::EmptyStencil, "no cells");
  for (std::size_t j = 0; j < n; ++j) {
    if (!region.contains(cells[j])) throw Error(ErrorCode::AverageOutsideInterior, "input cell outside region", j);
  }
  const double lambda = dt / dx;
  auto at = [&](std::size_t j, long off) { return cells[(j + n + static_cast<std::size_t>(off + 2 * static_cast<long>(n))) % n]; };
  std::vector<State> fhat(n);
  for (std::size_t f = 0; f < n; ++f) {
    const State stencil[4] = {at(f, -1), at(f, 0), at(f, 1), at(f, 2)};
    const double sigma = sigma_for_interface(law, stencil);
    if (lambda * sigma > 1.0 + kCflSlack) {
      throw Error(ErrorCode::CFLViolation, "lambda * sigma = " + fmt12(lambda * sigma) + " > 1", f);
    }
    fhat[f] = lax_friedrichs(law, at(f, 0), at(f, 1), sigma);
  }
  std::vector<State> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = cells[j] - lambda * (fhat[j] - fhat[(j + n - 1) % n]);
  return out;
}

double flux_sigma(const DGField& field, const SchemeConfig& config) {
  if (config.flux.global_sigma) return global_sigma(config.system, field);
  const auto s = face_sigmas(config.system, field, config.flux.sigma_policy);
  return *std::max_element(s.begin(), s.end());
}

DGField dg_residual(const DGField& field, const SchemeConfig& config) {
  return dg_residual(field, config, flux_sigma(field, config));
}

DGField dg_residual(const DGField& field, const SchemeConfig& config, double sigma) {
  const Mesh& mesh = field.mesh();
  const std::size_t n = field.n_cells();
  const std::size_t nm = field.n_modes();
  const int k = field.degree();
  const double dx = mesh.dx();
  const double eps = config.flux.epsilon;
  const bool conv = config.convection_enabled;
  const PressureLaw& law = config.system;

  const Quadrature quad = gauss_legendre(k + 3);
  const std::size_t nq = quad.size();
  std::vector<double> val_q(nm * nq), der_q(nm * nq);
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t q = 0; q < nq; ++q) {
      val_q[m * nq + q] = legendre(static_cast<int>(m), quad.nodes[q]);
      der_q[m * nq + q] = legendre_derivative(static_cast<int>(m), quad.nodes[q], 1);
    }
  }
  std::vector<double> val_e(nm * 2), d1_e(nm * 2), d2_e(nm * 2);
  for (std::size_t m = 0; m < nm; ++m) {
    for (int e = 0; e < 2; ++e) {
      const double xi = e == 0 ? -1.0 : 1.0;
      val_e[m * 2 + e] = legendre(static_cast<int>(m), xi);
      d1_e[m * 2 + e] = legendre_derivative(static_cast<int>(m), xi, 1);
      d2_e[m * 2 + e] = legendre_derivative(static_cast<int>(m), xi, 2);
    }
  }

  const auto coeffs = field.coeffs();
  std::vector<double> wq(n * 2 * nq), wxq(n * 2 * nq), we(n * 4), wxe(n * 4), wxxe(n * 4);
  kernels::eval_modal(coeffs, nm, val_q, nq, wq);
  kernels::eval_modal(coeffs, nm, val_e, 2, we);
  if (eps > 0.0) {
    kernels::eval_modal(coeffs, nm, der_q, nq, wxq);
    kernels::eval_modal(coeffs, nm, d1_e, 2, wxe);
    kernels::eval_modal(coeffs, nm, d2_e, 2, wxxe);
  }
  const double s1 = 2.0 / dx;
  const double s2 = s1 * s1;
  // side 0: xi = -1, side 1: xi = +1
  auto pick = [](const std::vector<double>& a, std::size_t j, int side) {
    return State{a[(2 * j) * 2 + side], a[(2 * j + 1) * 2 + side]};
  };

  std::vector<double> sig;
  if (conv && !config.flux.global_sigma) sig = face_sigmas(law, field, config.flux.sigma_policy);

  // Face f sits between cells f and f+1.
  std::vector<State> fhat(n), what(n), jump(n);
  for (std::size_t f = 0; f < n; ++f) {
    const std::size_t jr = mesh.right(f);
    const State wl = pick(we, f, 1);
    const State wr = pick(we, jr, 0);
    jump[f] = wr - wl;
    if (conv) fhat[f] = lax_friedrichs(law, wl, wr, sig.empty() ? sigma : sig[f]);
    if (eps > 0.0) {
      State w = (config.flux.beta0 / dx) * jump[f];
      if (k >= 1) w += (0.5 * s1) * (pick(wxe, f, 1) + pick(wxe, jr, 0));
      if (k >= 2) w += (config.flux.beta1 * dx * s2) * (pick(wxxe, jr, 0) - pick(wxxe, f, 1));
      what[f] = w;
    }
  }

  DGField rate(mesh, k);
  std::vector<State> fq(nq);
  for (std::size_t j = 0; j < n; ++j) {
    if (conv) {
      for (std::size_t q = 0; q < nq; ++q) {
        const State w{wq[(2 * j) * nq + q], wq[(2 * j + 1) * nq + q]};
        if (law.kind == SystemKind::PSystem ? !(w.c1 > 0.0) : !(w.c1 >= 0.0)) {
          throw Error(ErrorCode::NonPositiveVolume, "c1 = " + fmt12(w.c1) + " at a quadrature point", j);
        }
        fq[q] = physical_flux(law, w);
      }
    }
    const std::size_t fr = j;
    const std::size_t fl = mesh.left(j);
    for (int c = 0; c < 2; ++c) {
      auto comp = [c](const State& s) { return c == 0 ? s.c1 : s.c2; };
      for (std::size_t m = 0; m < nm; ++m) {
        const double pm_l = (m % 2 == 0) ? 1.0 : -1.0;
        const double dpm_r = 0.5 * static_cast<double>(m * (m + 1));
        const double dpm_l = -pm_l * dpm_r;
        double rhs = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
          double integrand = 0.0;
          if (conv) integrand += comp(fq[q]);
          if (eps > 0.0) integrand -= eps * s1 * wxq[(2 * j + c) * nq + q];
          rhs += quad.weights[q] * integrand * der_q[m * nq + q];
        }
        if (conv) rhs -= comp(fhat[fr]) - pm_l * comp(fhat[fl]);
        if (eps > 0.0) {
          rhs += eps * (comp(what[fr]) - pm_l * comp(what[fl]));
          rhs += eps * s1 * (-0.5 * comp(jump[fr]) * dpm_r - 0.5 * comp(jump[fl]) * dpm_l);
        }
        rate.coeff(j, c, m) = static_cast<double>(2 * m + 1) / dx * rhs;
      }
    }
  }
  return rate;
}

double mu_bound(const SchemeConfig& config) {
  const double eps = config.flux.epsilon;
  if (!(eps > 0.0)) return kInf;
  const double b0 = config.flux.beta0;
  switch (config.cfl_mode) {
    case CflMode::ViscousSecond:
      return 1.0 / (4.0 * eps * b0);
    case CflMode::ViscousThird: {
      const double g = config.effective_gamma_t();
      const double theta = 2.0 - 8.0 * config.flux.beta1;
      double best = kInf;
      for (double sgn : {1.0, -1.0}) {
        const double den = (1.0 + sgn * g) * b0 - theta;
        if (den > 0.0) best = std::min(best, (1.0 + 3.0 * sgn * g) / den);
      }
      if (theta > 0.0) best = std::min(best, 2.0 / theta);
      return best / (12.0 * eps);
    }
    default:
      return kInf;
  }
}

double theorem_dt(double dx, double sigma, const SchemeConfig& config) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::DegenerateSigma, "sigma = " + fmt12(sigma));
  switch (config.cfl_mode) {
    case CflMode::FirstOrder:
      return dx / sigma;
    case CflMode::HighOrderConvective: {
      const int n = lobatto_points(config.degree);
      return dx / (n * (n - 1) * sigma);
    }
    case CflMode::ViscousSecond:
      return std::min(dx / (4.0 * sigma), dx * dx * mu_bound(config));
    case CflMode::ViscousThird: {
      const double g = config.effective_gamma_t();
      const double c1 = (1.0 + 3.0 * g) / (6.0 * (1.0 + g));
      const double c3 = (1.0 - 3.0 * g) / (6.0 * (1.0 - g));
      return std::min(std::min(c1, c3) * dx / (2.0 * sigma), dx * dx * mu_bound(config));
    }
  }
  return 0.0;
}

double paper_dt(double dx, double sigma, const SchemeConfig& config) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::DegenerateSigma, "sigma = " + fmt12(sigma));
  const double eps = config.flux.epsilon;
  const double b0 = config.flux.beta0;
  const double b1 = config.flux.beta1;
  switch (config.degree) {
    case 0:
      return dx / sigma;
    case 1:
      if (eps > 0.0) return std::min({dx / (4.0 * sigma), dx * dx / (6.0 * eps * b0), std::pow(dx, 2.0 / 3.0)});
      return std::min(dx / (3.0 * sigma), std::pow(dx, 2.0 / 3.0));
    default: {
      double dt = eps > 0.0 ? dx / (12.0 * sigma) : dx / (6.0 * sigma);
      const double den = 12.0 * eps * (8.0 * b1 + b0 - 2.0);
      if (eps > 0.0 && den > 0.0) dt = std::min(dt, dx * dx / den);
      return dt;
    }
  }
}

double certified_dt(const DGField& field, const SchemeConfig& config) {
  return theorem_dt(field.mesh().dx(), flux_sigma(field, config), config);
}

double policy_dt(const DGField& field, const SchemeConfig& config) {
  const double sigma = flux_sigma(field, config);
  const double dx = field.mesh().dx();
  return config.dt_policy == DtPolicy::TheoremBound ? theorem_dt(dx, sigma, config) : paper_dt(dx, sigma, config);
}

std::size_t test_set_violations(const DGField& field, const InvariantRegion& region, const TestSet& test_set) {
  std::size_t bad = 0;
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    for (double xi : test_set.abscissae()) {
      const State w = field.evaluate(j, xi);
      if (region.law.kind == SystemKind::PSystem && !(w.c1 > 0.0)) {
        ++bad;
      } else if (!region.contains(w)) {
        ++bad;
      }
    }
  }
  return bad;
}

std::size_t average_violations(const DGField& field, const InvariantRegion& region) {
  std::size_t bad = 0;
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    if (!region.contains(field.cell_average(j))) ++bad;
  }
  return bad;
}

namespace {

// One stage: limit the input (if enabled), evaluate the residual, return
// W + dt L(W) together with the limited input.
struct Stage {
  DGField limited;
  DGField euler;
};

Stage euler_stage(const DGField& in, const SchemeConfig& config, const TestSet& tests, double dt,
                  StepReport& report) {
  Stage st{in, DGField{}};
  if (config.limiter_enabled && config.degree > 0) {
    auto reps = limit_in_place(st.limited, config.region, tests);
    double stage_max = 0.0;
    for (const auto& r : reps) {
      report.min_theta = std::min(report.min_theta, r.theta);
      stage_max = std::max(stage_max, r.theta);
      if (r.activated) ++report.limiter_activations;
    }
    report.max_theta = report.stage_count == 0 ? stage_max : std::max(report.max_theta, stage_max);
    if (report.stage_count == 0) report.limiter_reports = std::move(reps);
  }
  if (config.limiter_enabled) report.test_set_violations += test_set_violations(st.limited, config.region, tests);

  const double sigma = config.convection_enabled ? flux_sigma(st.limited, config) : 0.0;
  report.sigma_global = std::max(report.sigma_global, sigma);
  if (config.dt_policy == DtPolicy::TheoremBound && dt > 0.0) {
    const double bound = config.convection_enabled ? theorem_dt(in.mesh().dx(), sigma, config)
                                                   : in.mesh().dx() * in.mesh().dx() * mu_bound(config);
    if (dt > bound * (1.0 + kCflSlack)) {
      throw Error(ErrorCode::CFLViolation, "dt = " + fmt12(dt) + " exceeds the certified " + fmt12(bound) +
                                               " at stage " + std::to_string(report.stage_count + 1));
    }
  }
  st.euler = st.limited;
  if (dt != 0.0) {
    const DGField rate = dg_residual(st.limited, config, sigma);
    kernels::combine3(st.euler.coeffs(), 1.0, st.limited.coeffs(), dt, rate.coeffs(), 0.0, st.limited.coeffs());
  }
  ++report.stage_count;
  report.avg_membership_violations += average_violations(st.euler, config.region);
  return st;
}

void post_check(const SchemeConfig& config, const StepReport& report) {
  if (config.dt_policy == DtPolicy::TheoremBound && report.avg_membership_violations > 0) {
    throw Error(ErrorCode::AverageOutsideInterior,
                std::to_string(report.avg_membership_violations) + " cell averages left the region");
  }
}

}  // namespace

StepResult forward_euler_step(const DGField& field, const SchemeConfig& config, double dt) {
  const TestSet tests = test_set_for(config);
  StepResult out;
  out.report.dt = dt;
  Stage s = euler_stage(field, config, tests, dt, out.report);
  out.field = std::move(s.euler);
  post_check(config, out.report);
  return out;
}

StepResult ssp_rk3_step(const DGField& field, const SchemeConfig& config, double dt) {
  const TestSet tests = test_set_for(config);
  StepResult out;
  out.report.dt = dt;
  Stage s1 = euler_stage(field, config, tests, dt, out.report);
  const DGField& wn = s1.limited;

  Stage s2 = euler_stage(s1.euler, config, tests, dt, out.report);
  DGField w2 = s2.euler;
  kernels::combine3(w2.coeffs(), 0.75, wn.coeffs(), 0.25, s2.euler.coeffs(), 0.0, wn.coeffs());
  out.report.avg_membership_violations += average_violations(w2, config.region);

  Stage s3 = euler_stage(w2, config, tests, dt, out.report);
  out.field = s3.euler;
  kernels::combine3(out.field.coeffs(), 1.0 / 3.0, wn.coeffs(), 2.0 / 3.0, s3.euler.coeffs(), 0.0, wn.coeffs());
  out.report.avg_membership_violations += average_violations(out.field, config.region);
  post_check(config, out.report);
  return out;
}

RunResult run_irp(const DGField& field0, const SchemeConfig& config, const RunControl& control) {
  config.validate();
  RunResult res;
  res.field = field0;
  if (config.limiter_enabled && config.degree > 0) limit_in_place(res.field, config.region, test_set_for(config));
  res.initial_total = field0.total();
  res.final_total = res.initial_total;
  const double scale1 = std::max(1.0, std::abs(res.initial_total.c1));
  const double scale2 = std::max(1.0, std::abs(res.initial_total.c2));

  auto step = [&](const DGField& f, double dt) {
    return config.integrator == TimeIntegrator::SspRk3 ? ssp_rk3_step(f, config, dt)
                                                       : forward_euler_step(f, config, dt);
  };

  while (res.t < control.t_final && (control.max_steps == 0 || res.steps < control.max_steps)) {
    double dt = control.fixed_dt > 0.0 ? control.fixed_dt : policy_dt(res.field, config);
    bool last = false;
    if (res.t + dt >= control.t_final) {
      dt = control.t_final - res.t;
      last = true;
    }
    StepResult sr;
    for (int attempt = 0;; ++attempt) {
      try {
        sr = step(res.field, dt);
        break;
      } catch (const Error& e) {
        // Later stages may see a larger sigma than the one dt was sized on.
        if (e.code() != ErrorCode::CFLViolation || attempt >= 30) throw;
        dt *= 0.8;
        last = false;
      }
    }
    res.field = std::move(sr.field);
    res.t = last ? control.t_final : res.t + dt;
    ++res.steps;
    res.avg_violations += sr.report.avg_membership_violations;
    res.test_set_violations += sr.report.test_set_violations;
    const State tot = res.field.total();
    res.max_relative_drift = std::max({res.max_relative_drift, std::abs(tot.c1 - res.initial_total.c1) / scale1,
                                       std::abs(tot.c2 - res.initial_total.c2) / scale2});
    res.log.push_back(std::move(sr.report));
    res.log.back().limiter_reports.clear();
    res.log.back().limiter_reports.shrink_to_fit();
  }
  if (config.limiter_enabled && config.degree > 0 && res.steps > 0) {
    limit_in_place(res.field, config.region, test_set_for(config));
  }
  res.final_total = res.field.total();
  return res;
}

void write_run_log(std::ostream& os, const RunResult& result) {
  os << "step,t,dt,sigma,min_theta,max_theta,violations\n";
  double t = 0.0;
  for (std::size_t i = 0; i < result.log.size(); ++i) {
    const auto& r = result.log[i];
    t += r.dt;
    if (i + 1 == result.log.size()) t = result.t;
    os << i + 1 << ',' << fmt12(t) << ',' << fmt12(r.dt) << ',' << fmt12(r.sigma_global) << ','
       << fmt12(r.min_theta) << ',' << fmt12(r.max_theta) << ','
       << r.avg_membership_violations + r.test_set_violations << '\n';
  }
}

double DecompositionCoefficients::weight_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

double DecompositionCoefficients::min_weight() const {
  double s = kInf;
  for (const auto& t : terms) s = std::min(s, t.weight);
  for (double a : alpha) s = std::min(s, a);
  return s;
}

DecompositionCoefficients decomposition_coefficients_unchecked(const SchemeConfig& config, double mu) {
  const double b0 = config.flux.beta0;
  const double b1 = config.flux.beta1;
  const double g = config.effective_gamma_t();
  const double em = 2.0 * config.flux.epsilon * mu;
  DecompositionCoefficients out;
  out.degree = config.degree;
  out.mu = mu;
  if (config.degree == 1) {
    if (g == 0.0) throw Error(ErrorCode::InvalidDecomposition, "gamma_t must be nonzero for degree 1");
    const double a1 = 0.5 * b0 + (b0 - 1.0) / (2.0 * g);
    const double a2 = 0.5 * b0 - (b0 - 1.0) / (2.0 * g);
    out.alpha = {a1, a2};
    const double center = 0.5 - em * b0;
    out.terms = {{1, -g, em * a1}, {1, g, em * a2}, {-1, -g, em * a2}, {-1, g, em * a1}, {0, -g, center}, {0, g, center}};
  } else if (config.degree == 2) {
    if (!(std::abs(g) < 1.0)) throw Error(ErrorCode::InvalidDecomposition, "|gamma_t| must be < 1 for degree 2");
    auto a1 = [&](double x) { return b0 + (8.0 * b1 - 3.0 - x) / (2.0 * (x + 1.0)); };
    auto a2 = [&](double x) { return (8.0 * b1 - 2.0) / (x * x - 1.0); };
    auto a3 = [&](double x) { return (8.0 * b1 - 1.0 - x) / (2.0 * (1.0 - x)); };
    const double c1 = (1.0 + 3.0 * g) / (6.0 * (1.0 + g));
    const double c2 = 2.0 / (3.0 * (1.0 - g * g));
    const double c3 = (1.0 - 3.0 * g) / (6.0 * (1.0 - g));
    const double a4 = c1 - em * (a3(-g) + a1(g));
    const double a5 = c2 - em * (a2(-g) + a2(g));
    const double a6 = c3 - em * (a1(-g) + a3(g));
    out.alpha = {a1(g), a1(-g), a2(g), a2(-g), a3(g), a3(-g), a4, a5, a6};
    out.terms = {{0, -1.0, a4},          {0, g, a5},         {0, 1.0, a6},
                 {1, -1.0, em * a1(g)},  {1, g, em * a2(g)}, {1, 1.0, em * a3(g)},
                 {-1, -1.0, em * a3(-g)}, {-1, g, em * a2(-g)}, {-1, 1.0, em * a1(-g)}};
  } else {
    throw Error(ErrorCode::InvalidOrder, "decomposition defined for degree 1 and 2 only");
  }
  return out;
}

DecompositionCoefficients convex_decomposition_coefficients(const SchemeConfig& config, double mu) {
  auto out = decomposition_coefficients_unchecked(config, mu);
  if (out.min_weight() < -1e-14) {
    throw Error(ErrorCode::NegativeCoefficient,
                "negative weight " + fmt12(out.min_weight()) + " at mu = " + fmt12(mu));
  }
  return out;
}

}  // namespace irp
