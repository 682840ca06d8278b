#pragma once

// Conservation-law systems with a convex invariant region bounded by two
// Riemann-invariant level sets:
//
//   p-system (Lagrangian isentropic gas)   w = (v, u),   p(v) = k v^-gamma
//   isentropic Euler, Eulerian coordinates w = (rho, m), p(rho) = k rho^gamma
//   shallow water, flat bottom             w = (h, m),   p(h) = g h^2 / 2
//
// The region is Sigma = { r(w) <= r0, s(w) >= s0 }. For the p-system
// r = u - g(v) and s = u + g(v) with g(v) = int_m^v sqrt(-p'). For the two
// Eulerian systems the "+" invariant is r and the "-" invariant is s, so the
// orientation of the bounds is the same but the roles of the velocity shift
// are mirrored.

#include <span>

#include "irp/error.hpp"

namespace irp {

/// A point in phase space. c1 is v, rho or h; c2 is u, rho*u or h*u.
struct State {
  double c1 = 0.0;
  double c2 = 0.0;

  constexpr State& operator+=(const State& o) {
    c1 += o.c1;
    c2 += o.c2;
    return *this;
  }
  constexpr State& operator-=(const State& o) {
    c1 -= o.c1;
    c2 -= o.c2;
    return *this;
  }
  constexpr State& operator*=(double a) {
    c1 *= a;
    c2 *= a;
    return *this;
  }
  friend constexpr State operator+(State a, const State& b) { return a += b; }
  friend constexpr State operator-(State a, const State& b) { return a -= b; }
  friend constexpr State operator*(double a, State b) { return b *= a; }
  friend constexpr State operator*(State b, double a) { return b *= a; }
  friend constexpr bool operator==(const State&, const State&) = default;
};

enum class SystemKind { PSystem, EulerianIsentropic, ShallowWater };

const char* to_string(SystemKind kind);

struct PressureLaw {
  SystemKind kind = SystemKind::PSystem;
  double k = 1.0;
  /// Adiabatic exponent; for shallow water this holds the gravitational constant.
  double gamma = 1.4;
  /// Lower limit of the g-integral (inf of the initial specific volume). p-system only.
  double m_ref = 1.0;

  static PressureLaw psystem(double gamma, double k = 1.0, double m_ref = 1.0);
  static PressureLaw eulerian(double gamma, double k = 1.0);
  static PressureLaw shallow_water(double gravity);

  double gravity() const { return gamma; }
};

/// Vacuum threshold below which the velocity of an Eulerian state is taken as 0.
inline constexpr double kVacuumThreshold = 1e-13;

double pressure(const PressureLaw& law, double c1);
/// dp/dc1.
double pressure_derivative(const PressureLaw& law, double c1);

/// Velocity u carried by a state (u itself for the p-system, m/c1 otherwise).
double velocity(const PressureLaw& law, const State& w);

/// Largest characteristic speed magnitude at w.
double wave_speed(const PressureLaw& law, const State& w);

/// Physical flux F(w).
State physical_flux(const PressureLaw& law, const State& w);

/// g(v) = int_{m_ref}^{v} sqrt(-p'(xi)) dxi for the p-system.
double g_integral(const PressureLaw& law, double v);
/// Inverse of g_integral. Throws NoIntersection when value >= sup g.
double g_inverse(const PressureLaw& law, double value);
/// sup_{v>0} g(v); finite for gamma > 1.
double g_supremum(const PressureLaw& law);

struct Invariants {
  double r = 0.0;
  double s = 0.0;
};

Invariants riemann_invariants(const PressureLaw& law, const State& w);

/// Inverse of riemann_invariants.
State state_from_invariants(const PressureLaw& law, double r, double s);

/// Default boundary slack used by membership predicates.
inline constexpr double kMembershipSlack = 1e-12;

struct InvariantRegion {
  double r0 = 0.0;
  double s0 = 0.0;
  PressureLaw law{};

  /// w in Sigma (closed), with an absolute slack on both bounds.
  bool contains(const State& w, double slack = kMembershipSlack) const;
  /// w in Sigma_0 (strict inequalities).
  bool contains_interior(const State& w) const;
  /// Signed margins (r0 - r, s - s0); both non-negative iff w in Sigma.
  Invariants margins(const State& w) const;
};

/// Returns law with m_ref replaced by the minimum c1 over the samples (p-system only).
PressureLaw with_reference_volume(PressureLaw law, std::span<const State> samples);

InvariantRegion region_from_samples(const PressureLaw& law, std::span<const State> samples);

/// Intersection of the two boundary curves r = r0 and s = s0.
State corner_state(const InvariantRegion& region);

}  // namespace irp
