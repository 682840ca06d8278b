#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "irp/harness.hpp"

using namespace irp;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("preset names") {
  for (auto id : {PresetId::Ex1ProjAccuracy, PresetId::Ex2PSysAccuracy, PresetId::Ex3ViscAccuracy,
                  PresetId::Ex4ViscousLimit, PresetId::Ex5ShockRarefaction, PresetId::Ex6RarefactionShock})
    CHECK(parse_preset(to_string(id)) == id);
  CHECK(parse_preset("ex3") == PresetId::Ex3ViscAccuracy);
  CHECK_THROWS_AS(parse_preset("ex7"), Error);
}

TEST_CASE("preset parameters") {
  auto p1 = make_preset(PresetId::Ex1ProjAccuracy);
  CHECK(p1.x_min == 0.0);
  CHECK(p1.x_max == doctest::Approx(2 * M_PI));
  CHECK(p1.base_cells == 32);
  CHECK(p1.t_final == 0.0);
  CHECK(p1.initial(M_PI / 2).c1 == doctest::Approx(1.0));

  auto p3 = make_preset(PresetId::Ex3ViscAccuracy);
  CHECK(p3.epsilon == 0.01);
  CHECK(p3.t_final == 0.1);

  auto p5 = make_preset(PresetId::Ex5ShockRarefaction);
  CHECK(p5.riemann);
  CHECK(p5.base_cells == 128);
  CHECK(p5.initial(-0.5) == State{1.0, 0.0});
  CHECK(p5.initial(0.5) == State{0.25, 0.1053});
  auto p6 = make_preset(PresetId::Ex6RarefactionShock);
  CHECK(p6.initial(0.5) == State{2.0, -0.3509});
}

TEST_CASE("initial regions") {
  auto p1 = make_preset(PresetId::Ex1ProjAccuracy);
  auto r1 = initial_region(p1, Mesh(p1.x_min, p1.x_max, 32));
  CHECK(r1.r0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.s0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.law.m_ref == doctest::Approx(1.0));

  auto p5 = make_preset(PresetId::Ex5ShockRarefaction);
  auto r5 = initial_region(p5, Mesh(p5.x_min, p5.x_max, 128));
  CHECK(r5.law.m_ref == doctest::Approx(0.25));
  CHECK(r5.r0 == doctest::Approx(0.1053).epsilon(1e-12));
  CHECK(r5.s0 == doctest::Approx(0.1053).epsilon(1e-12));
}

TEST_CASE("preset configurations") {
  auto p2 = make_preset(PresetId::Ex2PSysAccuracy);
  Mesh m(p2.x_min, p2.x_max, 32);
  auto reg = initial_region(p2, m);
  CHECK(preset_config(p2, 1, reg).cfl_mode == CflMode::HighOrderConvective);
  auto p3 = make_preset(PresetId::Ex3ViscAccuracy);
  CHECK(preset_config(p3, 1, reg).cfl_mode == CflMode::ViscousSecond);
  CHECK(preset_config(p3, 2, reg).cfl_mode == CflMode::ViscousThird);
  CHECK(preset_config(p3, 2, reg).flux.epsilon == 0.01);
}

TEST_CASE("error norms") {
  Mesh mesh(0.0, 2.0, 16);
  auto exact = [](double x) { return State{1.0 + x * x, 2.0 - 3.0 * x}; };
  auto f = project_initial(mesh, 2, exact);
  auto self = error_norms(f, exact);
  CHECK(self.linf < 1e-14);
  CHECK(self.l1 < 1e-14);

  DGField c(mesh, 1);
  for (std::size_t j = 0; j < 16; ++j) c.coeff(j, 0, 0) = 2.0;
  const double d = 0.125;
  auto e = error_norms(c, [&](double) { return State{2.0 + d, 0.0}; });
  CHECK(e.linf == doctest::Approx(d).epsilon(1e-14));
  CHECK(e.l1 == doctest::Approx(d * 2.0).epsilon(1e-14));
  CHECK(e.linf_c[1] == 0.0);

  auto e2 = error_norms(c, [&](double) { return State{2.0 + 0.3, 1.4}; });
  CHECK(e2.linf == doctest::Approx(std::hypot(0.3, 1.4)).epsilon(1e-14));
  CHECK(e2.l1_c[0] == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(e2.l1_c[1] == doctest::Approx(2.8).epsilon(1e-14));

  auto w = error_norms(c, [&](double x) { return State{x < 0.5 ? 5.0 : 2.0, 0.0}; }, std::make_pair(0.5, 2.0));
  CHECK(w.linf == 0.0);
}

TEST_CASE("projection error converges at k+1") {
  auto exact = [](double x) { return State{2.0 - std::sin(x), 1.0}; };
  for (int k : {1, 2}) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t n : {32u, 64u, 128u}) {
      Mesh mesh(0.0, 2 * M_PI, n);
      auto e = error_norms(project_initial(mesh, k, exact), exact);
      ConvergenceRow r;
      r.dx = mesh.dx();
      r.linf_error = e.linf;
      r.l1_error = e.l1;
      rows.push_back(r);
    }
    fill_orders(rows);
    CHECK_FALSE(rows[0].linf_order.has_value());
    CHECK(*rows[2].linf_order == doctest::Approx(k + 1).epsilon(0.05));
    CHECK(*rows[2].l1_order == doctest::Approx(k + 1).epsilon(0.05));
  }
}

TEST_CASE("fill_orders") {
  std::vector<ConvergenceRow> rows(3);
  rows[0].dx = 0.4;
  rows[1].dx = 0.2;
  rows[2].dx = 0.1;
  rows[0].linf_error = 1.0;
  rows[1].linf_error = 0.25;
  rows[2].linf_error = 0.0625;
  rows[0].l1_error = 1.0;
  rows[1].l1_error = 0.125;
  rows[2].l1_error = 0.015625;
  fill_orders(rows);
  CHECK(*rows[1].linf_order == doctest::Approx(2.0));
  CHECK(*rows[2].linf_order == doctest::Approx(2.0));
  CHECK(*rows[2].l1_order == doctest::Approx(3.0));
}

TEST_CASE("single-level table has no orders") {
  auto t = convergence_table(PresetId::Ex1ProjAccuracy, 1, 1);
  REQUIRE(t.rows.size() == 1);
  CHECK_FALSE(t.rows[0].linf_order.has_value());
  CHECK_FALSE(t.rows[0].l1_order.has_value());
  std::ostringstream os;
  write_convergence_csv(os, t.rows);
  auto ls = lines_of(os.str());
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "dx,linf_error,linf_order,l1_error,l1_order");
  CHECK(ls[1].find(",,") != std::string::npos);
}

TEST_CASE("convergence table csv") {
  auto t = convergence_table(PresetId::Ex1ProjAccuracy, 2, 3);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.avg_violations == 0);
  CHECK(t.test_set_violations == 0);
  for (std::size_t i = 1; i < 3; ++i) CHECK(t.rows[i].dx == doctest::Approx(t.rows[i - 1].dx / 2));
  std::ostringstream os;
  write_convergence_csv_detailed(os, t.rows);
  auto ls = lines_of(os.str());
  CHECK(ls.size() == 4);
  CHECK(ls[0].rfind("dx,linf_error,linf_order,l1_error,l1_order", 0) == 0);
}

TEST_CASE("violation scan") {
  auto p5 = make_preset(PresetId::Ex5ShockRarefaction);
  // odd cell count so the jump at x = 0 falls inside a cell
  Mesh mesh(p5.x_min, p5.x_max, 127);
  auto reg = initial_region(p5, mesh);
  auto ts = TestSet::gauss_lobatto(2);
  auto f = project_initial(mesh, 1, p5.initial);
  auto raw = violation_scan(f, reg, 16, ts);
  CHECK(raw.test_set_violations + raw.off_test_violations > 0);
  CHECK(raw.margins.size() == 127);
  CHECK(raw.points > 0);

  auto lim = limit_field(f, reg, ts);
  auto clean = violation_scan(lim.field, reg, 16, ts);
  CHECK(clean.test_set_violations == 0);

  const double inf = std::numeric_limits<double>::infinity();
  InvariantRegion wide{inf, -inf, reg.law};
  auto none = violation_scan(f, wide, 16, ts);
  CHECK(none.test_set_violations == 0);
  CHECK(none.off_test_violations == 0);

  std::ostringstream os;
  write_margins_csv(os, f, raw);
  auto ls = lines_of(os.str());
  CHECK(ls[0] == "cell_index,x,r_margin,s_margin");
  CHECK(ls.size() == 128);
}

TEST_CASE("riemann window") {
  auto p5 = make_preset(PresetId::Ex5ShockRarefaction);
  auto fan = solve_riemann(p5.law, p5.left, p5.right);
  auto w = riemann_window(p5, fan, 0.1);
  CHECK(w.first > p5.x_min);
  CHECK(w.second < p5.x_max);
  // the fan from the periodic wrap moves in at least at the sound speed of the right state
  const double c_right = std::sqrt(1.4 * std::pow(0.25, -2.4));
  CHECK(w.second <= p5.x_max - 0.1 * c_right + 1e-12);
  CHECK(w.second > 0.0);
  CHECK(w.first == doctest::Approx(-w.second));
  auto w0 = riemann_window(p5, fan, 0.0);
  CHECK(w0.first == doctest::Approx(p5.x_min));
  CHECK(w0.second == doctest::Approx(p5.x_max));
}

TEST_CASE("riemann run") {
  auto p6 = make_preset(PresetId::Ex6RarefactionShock);
  auto rr = run_riemann(p6, 64, true);
  CHECK(rr.run.t == doctest::Approx(p6.t_final));
  CHECK(rr.run.avg_violations == 0);
  CHECK(rr.run.test_set_violations == 0);
  CHECK(rr.run.max_relative_drift <= 1e-11);
  CHECK(rr.l1_distance > 0.0);
  CHECK(rr.l1_distance < 0.1);

  std::ostringstream os;
  write_plot_data(os, rr.run.field, [&](double x) { return sample(rr.fan, x / p6.t_final); }, 3);
  auto ls = lines_of(os.str());
  CHECK(ls[0] == "# x v_numeric u_numeric v_exact u_exact");
  CHECK(ls.size() == 1 + 64 * 3);
  std::istringstream row(ls[1]);
  double x, a, b, c, d;
  row >> x >> a >> b >> c >> d;
  CHECK(!row.fail());
  CHECK(c == doctest::Approx(1.0));
}

TEST_CASE("viscous limit study") {
  auto t = viscous_limit_study(1, 2.0, 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1].linf_order.has_value());
  CHECK(t.rows[1].linf_error < t.rows[0].linf_error);
}

TEST_CASE("ex3 limiter activity is an initial transient") {
  auto p3 = make_preset(PresetId::Ex3ViscAccuracy);
  Mesh mesh(p3.x_min, p3.x_max, p3.base_cells);
  auto reg = initial_region(p3, mesh);
  for (int k : {1, 2}) {
    CAPTURE(k);
    auto c = preset_config(p3, k, reg);
    auto r = run_irp(project_initial(mesh, k, p3.initial), c, {p3.t_final, 0, 0});
    std::size_t head = (r.log.size() + 9) / 10;
    std::size_t late = 0;
    for (std::size_t i = head; i < r.log.size(); ++i) late += r.log[i].limiter_activations;
    CHECK(late == 0);
  }
}

TEST_CASE("worker count") {
  ::setenv("IRP_THREADS", "3", 1);
  CHECK(worker_count() == std::min(3u, std::max(1u, std::thread::hardware_concurrency())));
  ::setenv("IRP_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("IRP_THREADS");
  CHECK(worker_count() >= 1);
}
