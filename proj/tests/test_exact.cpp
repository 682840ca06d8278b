#include <doctest.h>

#include <cmath>
#include <sstream>

#include "irp/exact.hpp"

using namespace irp;

namespace {

const PressureLaw kLaw = PressureLaw::psystem(1.4);

double c_of(double v) { return std::sqrt(-pressure_derivative(kLaw, v)); }

}  // namespace

TEST_CASE("shock curve") {
  CHECK(shock_curve(kLaw, {1.0, 0.3}, 1.0) == 0.3);
  double u = shock_curve(kLaw, {1.0, 0.0}, 0.5);
  CHECK(u == doctest::Approx(-std::sqrt(-0.5 * (1.0 - std::pow(2.0, 1.4)))).epsilon(1e-14));
  CHECK(std::abs(u + 0.9053) < 1e-4);
  CHECK(std::abs(shock_curve(kLaw, {1.2, 0.2118}, 2.0) + 0.3509) < 1e-4);
  CHECK_THROWS_AS(shock_curve(kLaw, {1.0, 0.0}, 0.0), Error);
}

TEST_CASE("rarefaction curve") {
  CHECK(rarefaction_curve(kLaw, {1.0, 0.4}, 1.0, Branch::Minus) == 0.4);
  CHECK(std::abs(rarefaction_curve(kLaw, {1.0, 0.0}, 1.2, Branch::Plus) - 0.2118) < 1e-4);
  CHECK(std::abs(rarefaction_curve(kLaw, {0.5, -0.9053}, 0.25, Branch::Minus) - 0.1053) < 1e-4);
  CHECK_THROWS_AS(rarefaction_curve(kLaw, {1.0, 0.0}, -1.0, Branch::Plus), Error);
}

TEST_CASE("trivial riemann problem") {
  auto fan = solve_riemann(kLaw, {0.7, 0.2}, {0.7, 0.2});
  CHECK(fan.middle.c1 == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fan.middle.c2 == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("shock-rarefaction data") {
  auto fan = solve_riemann(kLaw, {1.0, 0.0}, {0.25, 0.1053});
  CHECK(std::abs(fan.middle.c1 - 0.5) < 1e-4);
  CHECK(std::abs(fan.middle.c2 + 0.9053) < 1e-4);
  CHECK(fan.back.is_shock());
  CHECK_FALSE(fan.front.is_shock());
}

TEST_CASE("rarefaction-shock data") {
  auto fan = solve_riemann(kLaw, {1.0, 0.0}, {2.0, -0.3509});
  CHECK(std::abs(fan.middle.c1 - 1.2) < 1e-4);
  CHECK(std::abs(fan.middle.c2 - 0.2118) < 1e-4);
  CHECK_FALSE(fan.back.is_shock());
  CHECK(fan.front.is_shock());
}

TEST_CASE("middle state lies on both curves") {
  struct D {
    State l, r;
  };
  for (auto d : {D{{1.0, 0.0}, {0.25, 0.1053}}, D{{1.0, 0.0}, {2.0, -0.3509}}, D{{1.0, 0.5}, {1.0, -0.5}},
                 D{{0.5, -0.3}, {1.5, 0.4}}, D{{2.0, 0.0}, {0.3, 0.0}}}) {
    auto fan = solve_riemann(kLaw, d.l, d.r);
    const State m = fan.middle;
    double back = m.c1 < d.l.c1 ? shock_curve(kLaw, d.l, m.c1) : rarefaction_curve(kLaw, d.l, m.c1, Branch::Plus);
    CHECK(std::abs(back - m.c2) < 1e-10);
    // the front curve through the right state, written from the middle
    double front = m.c1 < d.r.c1 ? shock_curve(kLaw, m, d.r.c1) : rarefaction_curve(kLaw, m, d.r.c1, Branch::Minus);
    CHECK(std::abs(front - d.r.c2) < 1e-10);
    CHECK(fan.back.speed_hi <= fan.front.speed_lo);
  }
}

TEST_CASE("lax entropy condition") {
  auto a = solve_riemann(kLaw, {1.0, 0.0}, {0.25, 0.1053});
  CHECK(-c_of(a.left.c1) > a.back.speed_lo);
  CHECK(a.back.speed_lo > -c_of(a.middle.c1));
  auto b = solve_riemann(kLaw, {1.0, 0.0}, {2.0, -0.3509});
  CHECK(c_of(b.middle.c1) > b.front.speed_lo);
  CHECK(b.front.speed_lo > c_of(b.right.c1));
}

TEST_CASE("vacuum data has no solution") {
  CHECK_THROWS_AS(solve_riemann(kLaw, {1.0, -100.0}, {1.0, 100.0}), Error);
}

TEST_CASE("sampling") {
  auto fan = solve_riemann(kLaw, {1.0, 0.0}, {0.25, 0.1053});
  CHECK(sample(fan, -1e9) == fan.left);
  CHECK(sample(fan, 1e9) == fan.right);
  CHECK(sample(fan, fan.back.speed_lo) == fan.middle);
  double mid = 0.5 * (fan.back.speed_lo + fan.front.speed_lo);
  CHECK(sample(fan, mid) == fan.middle);
  if (fan.back.speed_lo < 0.0 && fan.front.speed_lo > 0.0) CHECK(sample(fan, 0.0) == fan.middle);
  for (double x : {-0.3, -0.05, 0.0, 0.11, 0.4}) CHECK(sample(fan, x / 0.1) == sample(fan, (2 * x) / 0.2));
}

TEST_CASE("invariants are constant across rarefactions") {
  auto a = solve_riemann(kLaw, {1.0, 0.0}, {0.25, 0.1053});
  double s_ref = riemann_invariants(kLaw, a.right).s;
  for (int i = 1; i < 20; ++i) {
    double xi = a.front.speed_lo + (a.front.speed_hi - a.front.speed_lo) * i / 20.0;
    CHECK(std::abs(riemann_invariants(kLaw, sample(a, xi)).s - s_ref) < 1e-10);
  }
  auto b = solve_riemann(kLaw, {1.0, 0.0}, {2.0, -0.3509});
  double r_ref = riemann_invariants(kLaw, b.left).r;
  for (int i = 1; i < 20; ++i) {
    double xi = b.back.speed_lo + (b.back.speed_hi - b.back.speed_lo) * i / 20.0;
    State w = sample(b, xi);
    CHECK(std::abs(riemann_invariants(kLaw, w).r - r_ref) < 1e-10);
    CHECK(c_of(w.c1) == doctest::Approx(-xi).epsilon(1e-12));
  }
}

TEST_CASE("fan CSV") {
  auto fan = solve_riemann(kLaw, {1.0, 0.0}, {0.25, 0.1053});
  std::ostringstream os;
  write_fan_csv(os, fan, 0.0, 0.1, -1.0, 1.0, 5);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,v,u");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
  CHECK(os.str().find("\n-1,1,0\n") != std::string::npos);
}
