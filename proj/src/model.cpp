#include "irp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace irp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveVolume: return "NonPositiveVolume";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::AverageOutsideInterior: return "AverageOutsideInterior";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::XiOutOfRange: return "XiOutOfRange";
    case ErrorCode::InvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::DegenerateSigma: return "DegenerateSigma";
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::EmptyStencil: return "EmptyStencil";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::PSystem: return "psystem";
    case SystemKind::EulerianIsentropic: return "euler";
    case SystemKind::ShallowWater: return "shallow";
  }
  return "unknown";
}

PressureLaw PressureLaw::psystem(double gamma, double k, double m_ref) {
  return PressureLaw{SystemKind::PSystem, k, gamma, m_ref};
}

PressureLaw PressureLaw::eulerian(double gamma, double k) {
  return PressureLaw{SystemKind::EulerianIsentropic, k, gamma, 1.0};
}

PressureLaw PressureLaw::shallow_water(double gravity) {
  return PressureLaw{SystemKind::ShallowWater, 1.0, gravity, 1.0};
}

namespace {

void require_positive(double v) {
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveVolume, "v = " + std::to_string(v));
}

void require_non_negative(double c1) {
  if (!(c1 >= 0.0)) throw Error(ErrorCode::NonPositiveVolume, "c1 = " + std::to_string(c1));
}

// Coefficient of the Eulerian invariant shift: r,s = u +/- coef * c1^expo.
struct EulerianShift {
  double coef;
  double expo;
};

EulerianShift eulerian_shift(const PressureLaw& law) {
  if (law.kind == SystemKind::ShallowWater) return {2.0 * std::sqrt(law.gravity()), 0.5};
  return {2.0 * std::sqrt(law.k * law.gamma) / (law.gamma - 1.0), 0.5 * (law.gamma - 1.0)};
}

}  // namespace

double pressure(const PressureLaw& law, double c1) {
  switch (law.kind) {
    case SystemKind::PSystem:
      require_positive(c1);
      return law.k * std::pow(c1, -law.gamma);
    case SystemKind::EulerianIsentropic:
      require_non_negative(c1);
      return law.k * std::pow(c1, law.gamma);
    case SystemKind::ShallowWater:
      require_non_negative(c1);
      return 0.5 * law.gravity() * c1 * c1;
  }
  return 0.0;
}

double pressure_derivative(const PressureLaw& law, double c1) {
  switch (law.kind) {
    case SystemKind::PSystem:
      require_positive(c1);
      return -law.k * law.gamma * std::pow(c1, -law.gamma - 1.0);
    case SystemKind::EulerianIsentropic:
      require_non_negative(c1);
      return law.k * law.gamma * std::pow(c1, law.gamma - 1.0);
    case SystemKind::ShallowWater:
      require_non_negative(c1);
      return law.gravity() * c1;
  }
  return 0.0;
}

double velocity(const PressureLaw& law, const State& w) {
  if (law.kind == SystemKind::PSystem) return w.c2;
  require_non_negative(w.c1);
  return w.c1 < kVacuumThreshold ? 0.0 : w.c2 / w.c1;
}

double wave_speed(const PressureLaw& law, const State& w) {
  if (law.kind == SystemKind::PSystem) return std::sqrt(-pressure_derivative(law, w.c1));
  return std::abs(velocity(law, w)) + std::sqrt(pressure_derivative(law, w.c1));
}

State physical_flux(const PressureLaw& law, const State& w) {
  if (law.kind == SystemKind::PSystem) return {-w.c2, pressure(law, w.c1)};
  const double u = velocity(law, w);
  return {w.c2, w.c2 * u + pressure(law, w.c1)};
}

double g_integral(const PressureLaw& law, double v) {
  require_positive(v);
  const double a = 0.5 * (law.gamma - 1.0);
  const double c = 2.0 * std::sqrt(law.k * law.gamma) / (law.gamma - 1.0);
  return c * (std::pow(law.m_ref, -a) - std::pow(v, -a));
}

double g_supremum(const PressureLaw& law) {
  const double a = 0.5 * (law.gamma - 1.0);
  return 2.0 * std::sqrt(law.k * law.gamma) / (law.gamma - 1.0) * std::pow(law.m_ref, -a);
}

double g_inverse(const PressureLaw& law, double value) {
  const double a = 0.5 * (law.gamma - 1.0);
  const double c = 2.0 * std::sqrt(law.k * law.gamma) / (law.gamma - 1.0);
  const double base = std::pow(law.m_ref, -a) - value / c;
  if (!(base > 0.0)) {
    throw Error(ErrorCode::NoIntersection,
                "g^-1(" + std::to_string(value) + ") does not exist (sup g = " +
                    std::to_string(g_supremum(law)) + ")");
  }
  return std::pow(base, -1.0 / a);
}

Invariants riemann_invariants(const PressureLaw& law, const State& w) {
  if (law.kind == SystemKind::PSystem) {
    const double g = g_integral(law, w.c1);
    return {w.c2 - g, w.c2 + g};
  }
  const double u = velocity(law, w);
  const auto [coef, expo] = eulerian_shift(law);
  const double shift = coef * std::pow(w.c1, expo);
  return {u + shift, u - shift};
}

State state_from_invariants(const PressureLaw& law, double r, double s) {
  const double u = 0.5 * (r + s);
  if (law.kind == SystemKind::PSystem) return {g_inverse(law, 0.5 * (s - r)), u};
  const double shift = 0.5 * (r - s);
  if (shift < 0.0) throw Error(ErrorCode::NoIntersection, "r < s for an Eulerian system");
  const auto [coef, expo] = eulerian_shift(law);
  const double c1 = std::pow(shift / coef, 1.0 / expo);
  return {c1, c1 * u};
}

bool InvariantRegion::contains(const State& w, double slack) const {
  const auto [r, s] = riemann_invariants(law, w);
  return r <= r0 + slack && s >= s0 - slack;
}

bool InvariantRegion::contains_interior(const State& w) const {
  const auto [r, s] = riemann_invariants(law, w);
  return r < r0 && s > s0;
}

Invariants InvariantRegion::margins(const State& w) const {
  const auto [r, s] = riemann_invariants(law, w);
  return {r0 - r, s - s0};
}

PressureLaw with_reference_volume(PressureLaw law, std::span<const State> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "no samples for m_ref");
  if (law.kind != SystemKind::PSystem) return law;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& w : samples) {
    require_positive(w.c1);
    m = std::min(m, w.c1);
  }
  law.m_ref = m;
  return law;
}

InvariantRegion region_from_samples(const PressureLaw& law, std::span<const State> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySamples, "region needs at least one sample");
  InvariantRegion region{-std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity(), law};
  for (const auto& w : samples) {
    const auto [r, s] = riemann_invariants(law, w);
    region.r0 = std::max(region.r0, r);
    region.s0 = std::min(region.s0, s);
  }
  return region;
}

State corner_state(const InvariantRegion& region) {
  return state_from_invariants(region.law, region.r0, region.s0);
}

}  // namespace irp
