#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corner_case_data.hpp"
#include "irp/limiter.hpp"
#include "irp/quadrature.hpp"

using namespace irp;

namespace {

bool test_set_inside(const CellPolynomial& p, const InvariantRegion& reg, const TestSet& ts) {
  for (double xi : ts.abscissae())
    if (!reg.contains(p.evaluate(xi))) return false;
  return true;
}

}  // namespace

TEST_CASE("test sets") {
  TestSet t({0.5, -1.0, 0.5, 1.0}, "custom");
  CHECK(t.size() == 3);
  CHECK(t.abscissae()[0] == -1.0);
  CHECK_THROWS_AS(TestSet({1.5}, "bad"), Error);
  CHECK(TestSet::gauss_lobatto(3).size() == 3);
  CHECK(TestSet::interior_pair(0.5).abscissae()[0] == -0.5);
  CHECK(TestSet::interior3(0.2).abscissae()[1] == 0.2);
  std::vector<TestSet> parts{TestSet::gauss_lobatto(2), TestSet::interior_pair(1.0)};
  CHECK(TestSet::union_of(parts).size() == 2);
}

TEST_CASE("corner case averages") {
  for (double h : {0.5, 0.1, 0.01}) {
    auto c = testdata::corner_case(h);
    auto rs = riemann_invariants(c.region.law, c.avg);
    CHECK(rs.r == doctest::Approx((-1 - h * h) / 2).epsilon(1e-12));
    CHECK(rs.s == doctest::Approx((1 + h * h) / 2).epsilon(1e-12));
    CHECK(c.avg.c1 == doctest::Approx(2 * std::sqrt(3.0) / (-1 + 2 * std::sqrt(3.0) - h * h)).epsilon(1e-12));
    CHECK(std::abs(c.avg.c2) < 1e-15);
  }
}

TEST_CASE("theta on the corner case") {
  auto ts = TestSet::gauss_lobatto(2);
  auto c5 = testdata::corner_case(0.5);
  auto r5 = compute_theta(c5.poly, c5.avg, c5.region, ts);
  CHECK(r5.r_max == doctest::Approx(3.831).epsilon(5e-4 / 3.831));
  CHECK(r5.s_min == doctest::Approx(-3.081).epsilon(5e-4 / 3.081));
  CHECK(std::abs(r5.theta1 - 0.224) < 5e-4);
  // theta2 recomputed from the tabulated s_min = -3.081, s_bar = 0.625, s0 = 0.375
  double th2 = (0.625 - 0.375) / (0.625 + 3.081);
  CHECK(std::abs(r5.theta2 - th2) < 5e-4);
  CHECK(r5.theta == r5.theta2);
  CHECK(r5.activated);

  auto c1 = testdata::corner_case(0.1);
  auto r1 = compute_theta(c1.poly, c1.avg, c1.region, ts);
  CHECK(std::abs(r1.theta1 - 0.551) < 5e-4);
  CHECK(std::abs(r1.theta2 - 0.012) < 5e-4);
}

TEST_CASE("limited corner case passes on the test set") {
  auto ts = TestSet::gauss_lobatto(2);
  for (double h : {0.5, 0.1, 0.01}) {
    auto c = testdata::corner_case(h);
    CHECK_FALSE(test_set_inside(c.poly, c.region, ts));
    auto rep = compute_theta(c.poly, c.avg, c.region, ts);
    auto lim = apply_limiter(c.poly, c.avg, rep.theta);
    CHECK(test_set_inside(lim, c.region, ts));
    for (double f : {0.9, 0.5, 0.1}) CHECK(test_set_inside(apply_limiter(c.poly, c.avg, f * rep.theta), c.region, ts));
  }
}

TEST_CASE("constant interior polynomial is untouched") {
  InvariantRegion reg{1.0, 1.0, PressureLaw::psystem(1.4)};
  CellPolynomial p{{2.0, 0.0}, {1.0, 0.0}};
  auto rep = compute_theta(p, p.average(), reg, TestSet::gauss_lobatto(3));
  CHECK(rep.theta == 1.0);
  CHECK_FALSE(rep.activated);
}

TEST_CASE("average outside the region is rejected") {
  InvariantRegion reg{1.0, 1.0, PressureLaw::psystem(1.4)};
  CellPolynomial p{{0.5, 0.1}, {1.0, 0.0}};
  CHECK_THROWS_AS(compute_theta(p, p.average(), reg, TestSet::gauss_lobatto(2)), Error);
}

TEST_CASE("apply_limiter") {
  CellPolynomial p{{2.0, 0.3, -0.1}, {1.0, 0.2, 0.05}};
  auto same = apply_limiter(p, p.average(), 1.0);
  CHECK(same.c1 == p.c1);
  CHECK(same.c2 == p.c2);
  auto half = apply_limiter(p, p.average(), 0.5);
  CHECK(std::abs(half.average().c1 - 2.0) < 1e-14);
  CHECK(std::abs(half.average().c2 - 1.0) < 1e-14);
  CHECK(half.c1[1] == doctest::Approx(0.15));
  CHECK_THROWS_AS(apply_limiter(p, p.average(), 1.5), Error);
  CHECK_THROWS_AS(apply_limiter(p, p.average(), -0.1), Error);
}

TEST_CASE("near-boundary average gives finite theta") {
  auto law = PressureLaw::psystem(1.4);
  InvariantRegion reg{1.0, 1.0, law};
  State avg{1.0 + 1e-9, 1.0};
  CellPolynomial p{{avg.c1, 0.3}, {avg.c2, 0.0}};
  auto rep = compute_theta(p, avg, reg, TestSet::gauss_lobatto(2));
  CHECK(std::isfinite(rep.theta));
  CHECK(rep.theta >= 0.0);
  CHECK(rep.theta < 1e-6);
}

TEST_CASE("field limiting") {
  auto law = PressureLaw::psystem(1.4);
  InvariantRegion reg{1.0, 1.0, law};
  auto ts = TestSet::gauss_lobatto(2);
  Mesh mesh(0.0, 2 * M_PI, 32);
  auto f = project_initial(mesh, 1, [](double x) { return State{2.0 - std::sin(x), 1.0}; });
  auto lim = limit_field(f, reg, ts);
  REQUIRE(lim.reports.size() == 32);
  std::size_t active = 0;
  for (std::size_t j = 0; j < 32; ++j) {
    CHECK(lim.reports[j].cell_index == j);
    active += lim.reports[j].activated;
    CHECK(std::abs(lim.field.cell_average(j).c1 - f.cell_average(j).c1) <= 1e-13);
    CHECK(std::abs(lim.field.cell_average(j).c2 - f.cell_average(j).c2) <= 1e-13);
    for (double xi : ts.abscissae()) CHECK(reg.contains(lim.field.evaluate(j, xi)));
  }
  CHECK(active > 0);

  auto again = limit_field(lim.field, reg, ts);
  for (const auto& r : again.reports) CHECK(r.theta == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<TestSet> per_cell(32, ts);
  auto lim2 = limit_field(f, reg, per_cell);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    CHECK(std::abs(lim2.field.coeffs()[i] - lim.field.coeffs()[i]) < 1e-14);

  auto inside = project_initial(mesh, 2, [](double x) { return State{2.5 - 0.3 * std::sin(x), 1.0}; });
  auto none = limit_field(inside, reg, TestSet::gauss_lobatto(3));
  for (const auto& r : none.reports) CHECK_FALSE(r.activated);
  for (std::size_t i = 0; i < inside.coeffs().size(); ++i) CHECK(none.field.coeffs()[i] == inside.coeffs()[i]);
}

TEST_CASE("limiting error stays proportional to projection error") {
  auto law = PressureLaw::psystem(1.4);
  InvariantRegion reg{1.0, 1.0, law};
  auto exact = [](double x) { return State{2.0 - std::sin(x), 1.0}; };
  for (int k : {1, 2}) {
    auto ts = TestSet::gauss_lobatto(k == 1 ? 2 : 3);
    auto q = gauss_lobatto(2 * k + 3);
    for (std::size_t n : {32u, 64u, 128u, 256u, 512u}) {
      Mesh mesh(0.0, 2 * M_PI, n);
      auto f = project_initial(mesh, k, exact);
      auto lim = limit_field(f, reg, ts);
      double e0 = 0.0, e1 = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (double xi : q.nodes) {
          State w = exact(mesh.position(j, xi));
          State a = f.evaluate(j, xi) - w, b = lim.field.evaluate(j, xi) - w;
          e0 = std::max(e0, std::hypot(a.c1, a.c2));
          e1 = std::max(e1, std::hypot(b.c1, b.c2));
        }
      CHECK(e1 <= 10.0 * e0);
    }
  }
}

TEST_CASE("non-physical test values are handled") {
  auto law = PressureLaw::psystem(1.4, 1.0, 0.5);
  InvariantRegion reg{0.5, -0.5, law};
  CellPolynomial p{{0.6, 0.9}, {0.0, 0.0}};
  auto rep = compute_theta(p, p.average(), reg, TestSet::gauss_lobatto(2));
  CHECK(rep.theta < 1.0);
  auto lim = apply_limiter(p, p.average(), rep.theta);
  CHECK(lim.evaluate(-1.0).c1 > 0.0);
  CHECK(reg.contains(lim.evaluate(-1.0)));
  CHECK(reg.contains(lim.evaluate(1.0)));
}

TEST_CASE("C4 diagnostic") {
  auto law = PressureLaw::psystem(3.0, 1.0, 1.0);
  for (double h : {0.5, 0.1, 0.01}) {
    State avg{1 + h * h / 4, 1.0};
    CHECK(c4_diagnostic(avg, {1.0, 1.0, law}) == doctest::Approx(2.0).epsilon(1e-9));
  }
  auto c = testdata::corner_case(0.1);
  CHECK(c4_diagnostic(c.avg, c.region) == doctest::Approx(200.0).epsilon(1e-9));

  auto l14 = PressureLaw::psystem(1.4, 1.0, 1.0);
  State avg{2.0, 0.0};
  double g = g_integral(l14, 2.0);
  CHECK(c4_diagnostic(avg, {-g + 0.5, g - 0.5, l14}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(c4_diagnostic(avg, {-g, g, l14}), Error);
}

TEST_CASE("reports CSV") {
  std::vector<LimiterReport> reps(2);
  reps[1].cell_index = 1;
  reps[1].theta = 0.25;
  reps[1].theta1 = 0.25;
  reps[1].activated = true;
  std::ostringstream os;
  write_reports_csv(os, reps);
  CHECK(os.str() == "cell_index,theta,theta1,theta2,activated\n0,1,1,1,0\n1,0.25,0.25,1,1\n");
}
