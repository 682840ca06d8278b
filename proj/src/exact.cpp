#include "irp/exact.hpp"

#include <cmath>
#include <ostream>

#include "irp/format.hpp"

namespace irp {

namespace {

void require_psystem(const PressureLaw& law) {
  if (law.kind != SystemKind::PSystem) throw Error(ErrorCode::InvalidConfig, "exact solver covers the p-system only");
}

double char_speed(const PressureLaw& law, double v) { return std::sqrt(-pressure_derivative(law, v)); }

// u of the back (1-)wave curve through wl: shock below v_l, rarefaction above.
double back_curve(const PressureLaw& law, const State& wl, double v) {
  return v < wl.c1 ? shock_curve(law, wl, v) : rarefaction_curve(law, wl, v, Branch::Plus);
}

// u_m such that (v, u_m) connects to wr through a front (2-)wave.
double front_curve(const PressureLaw& law, const State& wr, double v) {
  if (v < wr.c1) return wr.c2 + std::sqrt((wr.c1 - v) * (pressure(law, v) - pressure(law, wr.c1)));
  return wr.c2 + g_integral(law, wr.c1) - g_integral(law, v);
}

}  // namespace

double shock_curve(const PressureLaw& law, const State& wl, double v) {
  require_psystem(law);
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveVolume, "v = " + fmt12(v));
  const double rad = (v - wl.c1) * (pressure(law, wl.c1) - pressure(law, v));
  if (rad < 0.0) throw Error(ErrorCode::NegativeRadicand, "shock radicand " + fmt12(rad));
  return wl.c2 - std::sqrt(rad);
}

double rarefaction_curve(const PressureLaw& law, const State& wl, double v, Branch branch) {
  require_psystem(law);
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveVolume, "v = " + fmt12(v));
  const double dg = g_integral(law, v) - g_integral(law, wl.c1);
  return branch == Branch::Plus ? wl.c2 + dg : wl.c2 - dg;
}

WaveFan solve_riemann(const PressureLaw& law, const State& wl, const State& wr) {
  require_psystem(law);
  if (!(wl.c1 > 0.0 && wr.c1 > 0.0)) throw Error(ErrorCode::NonPositiveVolume, "Riemann data needs v > 0");
  auto f = [&](double v) { return back_curve(law, wl, v) - front_curve(law, wr, v); };

  double lo = std::log(1e-8);
  double hi = std::log(1e8);
  if (!(f(std::exp(lo)) < 0.0 && f(std::exp(hi)) > 0.0)) {
    throw Error(ErrorCode::NoSolution, "wave curves do not intersect (vacuum)");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(std::exp(mid)) < 0.0 ? lo : hi) = mid;
  }
  double v = std::exp(0.5 * (lo + hi));
  for (int it = 0; it < 8; ++it) {
    const double r = f(v);
    if (std::abs(r) <= 1e-14) break;
    const double h = 1e-7 * v;
    const double d = (f(v + h) - f(v - h)) / (2.0 * h);
    if (!(d > 0.0)) break;
    const double next = v - r / d;
    if (!(next > 0.0) || std::abs(f(next)) >= std::abs(r)) break;
    v = next;
  }

  WaveFan fan;
  fan.law = law;
  fan.left = wl;
  fan.right = wr;
  fan.middle = {v, back_curve(law, wl, v)};

  if (v < wl.c1) {
    const double s = -std::sqrt((pressure(law, v) - pressure(law, wl.c1)) / (wl.c1 - v));
    fan.back = {Wave::Kind::Shock, s, s};
  } else if (v > wl.c1) {
    fan.back = {Wave::Kind::Rarefaction, -char_speed(law, wl.c1), -char_speed(law, v)};
  } else {
    const double s = -char_speed(law, v);
    fan.back = {Wave::Kind::Shock, s, s};
  }
  if (v < wr.c1) {
    const double s = std::sqrt((pressure(law, v) - pressure(law, wr.c1)) / (wr.c1 - v));
    fan.front = {Wave::Kind::Shock, s, s};
  } else if (v > wr.c1) {
    fan.front = {Wave::Kind::Rarefaction, char_speed(law, v), char_speed(law, wr.c1)};
  } else {
    const double s = char_speed(law, v);
    fan.front = {Wave::Kind::Shock, s, s};
  }
  return fan;
}

State sample(const WaveFan& fan, double xi) {
  const PressureLaw& law = fan.law;
  const double expo = -2.0 / (law.gamma + 1.0);
  const double scale = std::sqrt(law.k * law.gamma);
  auto v_at_speed = [&](double c) { return std::pow(c / scale, expo); };

  if (fan.back.is_shock()) {
    if (xi < fan.back.speed_lo) return fan.left;
  } else {
    if (xi <= fan.back.speed_lo) return fan.left;
    if (xi < fan.back.speed_hi) {
      const double v = v_at_speed(-xi);
      return {v, fan.left.c2 + g_integral(law, v) - g_integral(law, fan.left.c1)};
    }
  }
  if (fan.front.is_shock()) {
    return xi < fan.front.speed_lo ? fan.middle : fan.right;
  }
  if (xi <= fan.front.speed_lo) return fan.middle;
  if (xi >= fan.front.speed_hi) return fan.right;
  const double v = v_at_speed(xi);
  return {v, fan.right.c2 + g_integral(law, fan.right.c1) - g_integral(law, v)};
}

void write_fan_csv(std::ostream& os, const WaveFan& fan, double x0, double t, double x_min, double x_max,
                   std::size_t n) {
  os << "x,v,u\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n > 1 ? x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1) : x_min;
    const State w = t > 0.0 ? sample(fan, (x - x0) / t) : (x < x0 ? fan.left : fan.right);
    os << fmt12(x) << ',' << fmt12(w.c1) << ',' << fmt12(w.c2) << '\n';
  }
}

}  // namespace irp
