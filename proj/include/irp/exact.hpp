#pragma once

// Exact Riemann solutions of the p-system with p(v) = k v^-gamma: two waves
// (shock or rarefaction) separated by a constant middle state.

#include <iosfwd>
#include <vector>

#include "irp/model.hpp"

namespace irp {

struct Wave {
  enum class Kind { Shock, Rarefaction };
  Kind kind = Kind::Shock;
  /// Shock: both equal the shock speed. Rarefaction: head/tail characteristic speeds
  /// with head <= tail in x/t order.
  double speed_lo = 0.0;
  double speed_hi = 0.0;
  bool is_shock() const { return kind == Kind::Shock; }
};

struct WaveFan {
  PressureLaw law{};
  State left{};
  Wave back{};
  State middle{};
  Wave front{};
  State right{};
};

enum class Branch { Plus, Minus };

/// u on the shock curve through wl: u_l - sqrt((v - v_l)(p(v_l) - p(v))).
/// Throws NegativeRadicand when the radicand is negative.
double shock_curve(const PressureLaw& law, const State& wl, double v);

/// u = u_l + (g(v) - g(v_l)) for Plus, u_l - (g(v) - g(v_l)) for Minus.
double rarefaction_curve(const PressureLaw& law, const State& wl, double v, Branch branch);

/// Throws NoSolution when no middle state with v > 0 exists (vacuum).
WaveFan solve_riemann(const PressureLaw& law, const State& wl, const State& wr);

/// State at x/t = xi. At exactly a shock speed the state behind it (right side) is returned.
State sample(const WaveFan& fan, double xi);

/// CSV "x,v,u" at n equally spaced points of [x_min, x_max] at time t (fan centred at x0).
void write_fan_csv(std::ostream& os, const WaveFan& fan, double x0, double t, double x_min, double x_max,
                   std::size_t n);

}  // namespace irp
