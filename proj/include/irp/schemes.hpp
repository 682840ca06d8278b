#pragma once

// Time advancement: first-order finite volume, the modal DG residual for the
// (optionally viscous) system, forward Euler / SSP-RK3 steppers with the
// limiter applied before every stage, and the step-size certificates.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "irp/discretization.hpp"
#include "irp/fluxes.hpp"
#include "irp/limiter.hpp"
#include "irp/model.hpp"

namespace irp {

enum class CflMode { FirstOrder, HighOrderConvective, ViscousSecond, ViscousThird };
enum class DtPolicy { TheoremBound, PaperExperiment };
enum class TimeIntegrator { ForwardEuler, SspRk3 };

const char* to_string(CflMode mode);
const char* to_string(DtPolicy policy);

struct SchemeConfig {
  PressureLaw system{};
  /// Region enforced by the limiter and checked on cell averages.
  InvariantRegion region{};
  int degree = 1;
  FluxParams flux{};
  CflMode cfl_mode = CflMode::HighOrderConvective;
  /// Interior abscissa of the diffusive decompositions; defaults to 1 (k=1) and 0 (k=2).
  std::optional<double> gamma_t;
  DtPolicy dt_policy = DtPolicy::TheoremBound;
  bool limiter_enabled = true;
  /// false drops F(w) from the residual (pure diffusion, used in tests).
  bool convection_enabled = true;
  TimeIntegrator integrator = TimeIntegrator::SspRk3;

  double effective_gamma_t() const;
  /// Throws InvalidConfig / InvalidOrder when the parameters leave the certified ranges.
  void validate() const;
};

/// N = ceil((k+3)/2), the Gauss-Lobatto size of the convective certificate.
int lobatto_points(int degree);

/// Points at which the mode's certificate needs membership.
TestSet test_set_for(const SchemeConfig& config);

struct StepReport {
  double dt = 0.0;
  double sigma_global = 0.0;
  std::vector<LimiterReport> limiter_reports;
  double min_theta = 1.0;
  double max_theta = 1.0;
  std::size_t limiter_activations = 0;
  std::size_t avg_membership_violations = 0;
  std::size_t test_set_violations = 0;
  int stage_count = 0;
};

/// One first-order Lax-Friedrichs step on cell values (periodic). sigma per face
/// from the FirstOrderStencil policy; throws CFLViolation when dt * sigma / dx > 1.
std::vector<State> fv1_step(std::span<const State> cells, const PressureLaw& law, const InvariantRegion& region,
                            double dt, double dx);

/// sigma used by the convective flux of this field (global max or max over face stencils).
double flux_sigma(const DGField& field, const SchemeConfig& config);

/// Modal time derivative dc_m/dt of every coefficient.
DGField dg_residual(const DGField& field, const SchemeConfig& config);
DGField dg_residual(const DGField& field, const SchemeConfig& config, double sigma);

/// Largest dt allowed by the certificate of config.cfl_mode at the given sigma.
double theorem_dt(double dx, double sigma, const SchemeConfig& config);
/// Step size recipes of the numerical experiments.
double paper_dt(double dx, double sigma, const SchemeConfig& config);

/// Certified step for the current field. Throws DegenerateSigma when sigma = 0.
double certified_dt(const DGField& field, const SchemeConfig& config);
/// certified_dt or paper_dt according to config.dt_policy.
double policy_dt(const DGField& field, const SchemeConfig& config);

/// mu0 of the mode (+infinity when epsilon = 0 or the mode is convective).
double mu_bound(const SchemeConfig& config);

struct StepResult {
  DGField field;
  StepReport report;
};

StepResult forward_euler_step(const DGField& field, const SchemeConfig& config, double dt);
StepResult ssp_rk3_step(const DGField& field, const SchemeConfig& config, double dt);

struct RunControl {
  double t_final = 0.0;
  /// 0 = unlimited.
  std::size_t max_steps = 0;
  /// Fixed dt instead of the policy (0 = use the policy).
  double fixed_dt = 0.0;
};

struct RunResult {
  DGField field;
  std::vector<StepReport> log;
  double t = 0.0;
  std::size_t steps = 0;
  State initial_total{};
  State final_total{};
  /// max over steps of |total - initial_total| / max(1, |initial_total|), per component max.
  double max_relative_drift = 0.0;
  std::size_t avg_violations = 0;
  std::size_t test_set_violations = 0;
};

/// Limit, then step until t_final (last dt clamped) or max_steps.
RunResult run_irp(const DGField& field0, const SchemeConfig& config, const RunControl& control);

/// CSV: step,t,dt,sigma,min_theta,max_theta,violations
void write_run_log(std::ostream& os, const RunResult& result);

/// Test-set points of the field outside the region (slack kMembershipSlack).
std::size_t test_set_violations(const DGField& field, const InvariantRegion& region, const TestSet& test_set);
/// Cells whose average is outside the region (slack kMembershipSlack).
std::size_t average_violations(const DGField& field, const InvariantRegion& region);

/// Weights of the convex decomposition of the diffusive update D_j.
struct DecompositionCoefficients {
  int degree = 1;
  double mu = 0.0;
  /// k=1: alpha[0..1] = alpha1, alpha2. k=2: alpha1(g), alpha1(-g), alpha2(g), alpha2(-g),
  /// alpha3(g), alpha3(-g), alpha4, alpha5, alpha6.
  std::vector<double> alpha;
  /// Weight of every point value entering D_j (cell offset -1/0/+1, abscissa, weight).
  struct Term {
    int cell_offset;
    double xi;
    double weight;
  };
  std::vector<Term> terms;
  double weight_sum() const;
  double min_weight() const;
};

/// Coefficients at mesh ratio mu = dt/dx^2. Throws NegativeCoefficient when a weight
/// is below -1e-14 and InvalidOrder for degrees other than 1 and 2.
DecompositionCoefficients convex_decomposition_coefficients(const SchemeConfig& config, double mu);
/// Same, returning the table without the sign check.
DecompositionCoefficients decomposition_coefficients_unchecked(const SchemeConfig& config, double mu);

}  // namespace irp
