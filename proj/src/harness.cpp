#include "irp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "irp/format.hpp"
#include "irp/quadrature.hpp"

namespace irp {

namespace {

constexpr double kPi = std::numbers::pi;

void run_parallel(std::vector<std::function<void()>>& tasks) {
  const unsigned nthreads = std::min<unsigned>(worker_count(), static_cast<unsigned>(tasks.size()));
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double max_char_speed(const PressureLaw& law, std::initializer_list<State> states) {
  double s = 0.0;
  for (const auto& w : states) s = std::max(s, wave_speed(law, w));
  return s;
}

}  // namespace

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IRP_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

const char* to_string(PresetId id) {
  switch (id) {
    case PresetId::Ex1ProjAccuracy: return "ex1";
    case PresetId::Ex2PSysAccuracy: return "ex2";
    case PresetId::Ex3ViscAccuracy: return "ex3";
    case PresetId::Ex4ViscousLimit: return "ex4";
    case PresetId::Ex5ShockRarefaction: return "ex5";
    case PresetId::Ex6RarefactionShock: return "ex6";
  }
  return "unknown";
}

PresetId parse_preset(const std::string& name) {
  static const std::pair<const char*, PresetId> table[] = {
      {"ex1", PresetId::Ex1ProjAccuracy},     {"Ex1ProjAccuracy", PresetId::Ex1ProjAccuracy},
      {"ex2", PresetId::Ex2PSysAccuracy},     {"Ex2PSysAccuracy", PresetId::Ex2PSysAccuracy},
      {"ex3", PresetId::Ex3ViscAccuracy},     {"Ex3ViscAccuracy", PresetId::Ex3ViscAccuracy},
      {"ex4", PresetId::Ex4ViscousLimit},     {"Ex4ViscousLimit", PresetId::Ex4ViscousLimit},
      {"ex5", PresetId::Ex5ShockRarefaction}, {"Ex5ShockRarefaction", PresetId::Ex5ShockRarefaction},
      {"ex6", PresetId::Ex6RarefactionShock}, {"Ex6RarefactionShock", PresetId::Ex6RarefactionShock},
  };
  for (const auto& [key, id] : table) {
    if (name == key) return id;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + name + "'");
}

ExperimentPreset make_preset(PresetId id) {
  ExperimentPreset p;
  p.id = id;
  const double gamma = 1.4;
  switch (id) {
    case PresetId::Ex1ProjAccuracy:
    case PresetId::Ex2PSysAccuracy:
    case PresetId::Ex3ViscAccuracy:
    case PresetId::Ex4ViscousLimit:
      p.law = PressureLaw::psystem(gamma, 1.0, 1.0);
      p.x_min = 0.0;
      p.x_max = 2.0 * kPi;
      p.base_cells = 32;
      p.t_final = id == PresetId::Ex1ProjAccuracy ? 0.0 : 0.1;
      p.epsilon = id == PresetId::Ex3ViscAccuracy ? 0.01 : 0.0;
      p.initial = [](double x) { return State{2.0 - std::sin(x), 1.0}; };
      p.extreme_states = {{1.0, 1.0}, {3.0, 1.0}};
      break;
    case PresetId::Ex5ShockRarefaction:
    case PresetId::Ex6RarefactionShock: {
      p.riemann = true;
      p.left = {1.0, 0.0};
      p.right = id == PresetId::Ex5ShockRarefaction ? State{0.25, 0.1053} : State{2.0, -0.3509};
      p.law = PressureLaw::psystem(gamma, 1.0, std::min(p.left.c1, p.right.c1));
      p.x_min = -1.0;
      p.x_max = 1.0;
      p.base_cells = 128;
      p.t_final = 0.1;
      const State l = p.left, r = p.right;
      p.initial = [l, r](double x) { return x < 0.0 ? l : r; };
      p.extreme_states = {l, r};
      break;
    }
  }
  return p;
}

InvariantRegion initial_region(const ExperimentPreset& preset, const Mesh& mesh) {
  std::vector<State> samples = preset.extreme_states;
  const Quadrature q = gauss_legendre(6);
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    for (double xi : q.nodes) samples.push_back(preset.initial(mesh.position(j, xi)));
  }
  const PressureLaw law = with_reference_volume(preset.law, samples);
  return region_from_samples(law, samples);
}

SchemeConfig preset_config(const ExperimentPreset& preset, int degree, const InvariantRegion& region) {
  SchemeConfig c;
  c.system = region.law;
  c.region = region;
  c.degree = degree;
  c.flux.epsilon = preset.epsilon;
  c.flux.beta0 = preset.beta0;
  c.flux.beta1 = preset.beta1;
  c.dt_policy = preset.dt_policy;
  if (degree == 0) {
    c.cfl_mode = CflMode::FirstOrder;
  } else if (preset.epsilon > 0.0) {
    c.cfl_mode = degree == 1 ? CflMode::ViscousSecond : CflMode::ViscousThird;
  } else {
    c.cfl_mode = CflMode::HighOrderConvective;
  }
  return c;
}

ErrorNorms error_norms(const DGField& numeric, const Reference& reference,
                       std::optional<std::pair<double, double>> window, int extra_points) {
  const Mesh& mesh = numeric.mesh();
  const int k = numeric.degree();
  const Quadrature gq = gauss_legendre(k + 3 + extra_points);
  const Quadrature lq = gauss_lobatto(2 * k + 3 + extra_points);
  const double half = 0.5 * mesh.dx();
  ErrorNorms e;
  for (std::size_t j = 0; j < mesh.n_cells; ++j) {
    if (window && (mesh.position(j, -1.0) < window->first - 1e-12 || mesh.position(j, 1.0) > window->second + 1e-12)) {
      continue;
    }
    for (std::size_t q = 0; q < gq.size(); ++q) {
      const State d = numeric.evaluate(j, gq.nodes[q]) - reference(mesh.position(j, gq.nodes[q]));
      const double w = half * gq.weights[q];
      e.l1 += w * std::hypot(d.c1, d.c2);
      e.l1_c[0] += w * std::abs(d.c1);
      e.l1_c[1] += w * std::abs(d.c2);
    }
    for (double xi : lq.nodes) {
      const State d = numeric.evaluate(j, xi) - reference(mesh.position(j, xi));
      e.linf = std::max(e.linf, std::hypot(d.c1, d.c2));
      e.linf_c[0] = std::max(e.linf_c[0], std::abs(d.c1));
      e.linf_c[1] = std::max(e.linf_c[1], std::abs(d.c2));
    }
  }
  return e;
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].linf_order.reset();
      rows[i].l1_order.reset();
      continue;
    }
    const double ratio = rows[i - 1].dx / rows[i].dx;
    rows[i].linf_order = std::log(rows[i - 1].linf_error / rows[i].linf_error) / std::log(ratio);
    rows[i].l1_order = std::log(rows[i - 1].l1_error / rows[i].l1_error) / std::log(ratio);
  }
}

ConvergenceTable convergence_table(const StudySpec& spec) {
  if (spec.levels < 1) throw Error(ErrorCode::InvalidConfig, "levels must be >= 1");
  ExperimentPreset preset = make_preset(spec.preset);
  if (preset.riemann) throw Error(ErrorCode::InvalidConfig, "convergence tables need a smooth preset (ex1..ex4)");
  if (spec.epsilon) preset.epsilon = *spec.epsilon;
  if (spec.beta0) preset.beta0 = *spec.beta0;
  if (spec.beta1) preset.beta1 = *spec.beta1;
  if (spec.base_cells) preset.base_cells = *spec.base_cells;
  if (spec.t_final) preset.t_final = *spec.t_final;
  if (spec.dt_policy) preset.dt_policy = *spec.dt_policy;
  std::optional<double> r_exp = spec.r_exponent;
  if (spec.preset == PresetId::Ex4ViscousLimit && !r_exp) r_exp = spec.degree + 1.0;

  const bool evolve = spec.preset != PresetId::Ex1ProjAccuracy && preset.t_final > 0.0;
  ConvergenceTable table;
  table.spec = spec;
  table.rows.resize(static_cast<std::size_t>(spec.levels));
  std::vector<DGField> results(static_cast<std::size_t>(spec.levels));
  std::vector<RunResult> runs(static_cast<std::size_t>(spec.levels));
  DGField reference;

  auto configure = [&](ExperimentPreset p, int degree, const Mesh& mesh, bool limiter) {
    const InvariantRegion region = initial_region(p, mesh);
    SchemeConfig cfg = preset_config(p, degree, region);
    cfg.limiter_enabled = limiter;
    if (spec.gamma_t && degree == spec.degree) cfg.gamma_t = spec.gamma_t;
    return cfg;
  };

  std::vector<std::function<void()>> tasks;
  for (int l = 0; l < spec.levels; ++l) {
    tasks.emplace_back([&, l] {
      const Mesh mesh(preset.x_min, preset.x_max, preset.base_cells << l);
      ExperimentPreset p = preset;
      if (r_exp) p.epsilon = std::pow(mesh.dx(), *r_exp);
      const SchemeConfig cfg = configure(p, spec.degree, mesh, spec.limiter);
      DGField f = project_initial(mesh, spec.degree, p.initial);
      if (evolve) {
        runs[l] = run_irp(f, cfg, RunControl{p.t_final, 0, 0.0});
        results[l] = runs[l].field;
      } else {
        if (spec.limiter && spec.degree > 0) limit_in_place(f, cfg.region, test_set_for(cfg));
        results[l] = std::move(f);
      }
    });
  }
  if (evolve) {
    tasks.emplace_back([&] {
      const Mesh mesh(preset.x_min, preset.x_max, (preset.base_cells << (spec.levels - 1)) * 4);
      ExperimentPreset p = preset;
      if (r_exp) p.epsilon = 0.0;
      const SchemeConfig cfg = configure(p, 2, mesh, true);
      reference = run_irp(project_initial(mesh, 2, p.initial), cfg, RunControl{p.t_final, 0, 0.0}).field;
    });
  }
  run_parallel(tasks);

  for (int l = 0; l < spec.levels; ++l) {
    const Reference ref = evolve ? Reference([&](double x) { return reference.evaluate_at(x); }) : preset.initial;
    const ErrorNorms e = error_norms(results[l], ref);
    auto& row = table.rows[l];
    row.dx = results[l].mesh().dx();
    row.linf_error = e.linf;
    row.l1_error = e.l1;
    for (int c = 0; c < 2; ++c) {
      row.linf_c[c] = e.linf_c[c];
      row.l1_c[c] = e.l1_c[c];
    }
    if (evolve) {
      row.steps = runs[l].steps;
      row.max_relative_drift = runs[l].max_relative_drift;
      for (const auto& s : runs[l].log) row.limiter_activations += s.limiter_activations;
      table.avg_violations += runs[l].avg_violations;
      table.test_set_violations += runs[l].test_set_violations;
    }
  }
  fill_orders(table.rows);
  return table;
}

ConvergenceTable convergence_table(PresetId preset, int degree, int levels, bool limiter) {
  StudySpec s;
  s.preset = preset;
  s.degree = degree;
  s.levels = levels;
  s.limiter = limiter;
  return convergence_table(s);
}

ConvergenceTable viscous_limit_study(int degree, double r_exponent, int levels) {
  if (!(r_exponent >= 0.0)) throw Error(ErrorCode::InvalidConfig, "r must be >= 0");
  StudySpec s;
  s.preset = PresetId::Ex4ViscousLimit;
  s.degree = degree;
  s.levels = levels;
  s.r_exponent = r_exponent;
  return convergence_table(s);
}

namespace {

std::string opt12(const std::optional<double>& x) { return x ? fmt12(*x) : std::string(); }

}  // namespace

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "dx,linf_error,linf_order,l1_error,l1_order\n";
  for (const auto& r : rows) {
    os << fmt12(r.dx) << ',' << fmt12(r.linf_error) << ',' << opt12(r.linf_order) << ',' << fmt12(r.l1_error) << ','
       << opt12(r.l1_order) << '\n';
  }
}

void write_convergence_csv_detailed(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "dx,linf_error,linf_order,l1_error,l1_order,linf_v,linf_u,l1_v,l1_u,steps,limiter_activations\n";
  for (const auto& r : rows) {
    os << fmt12(r.dx) << ',' << fmt12(r.linf_error) << ',' << opt12(r.linf_order) << ',' << fmt12(r.l1_error) << ','
       << opt12(r.l1_order) << ',' << fmt12(r.linf_c[0]) << ',' << fmt12(r.linf_c[1]) << ',' << fmt12(r.l1_c[0])
       << ',' << fmt12(r.l1_c[1]) << ',' << r.steps << ',' << r.limiter_activations << '\n';
  }
}

ScanReport violation_scan(const DGField& field, const InvariantRegion& region, int samples_per_cell,
                          const TestSet& test_set) {
  ScanReport rep;
  rep.margins.resize(field.n_cells());
  const double inf = std::numeric_limits<double>::infinity();
  auto check = [&](std::size_t j, double xi) {
    const State w = field.evaluate(j, xi);
    double dr = -inf, ds = -inf;
    const bool physical = region.law.kind == SystemKind::PSystem ? w.c1 > 0.0 : w.c1 >= 0.0;
    if (physical) {
      const auto m = region.margins(w);
      dr = m.r;
      ds = m.s;
    }
    rep.margins[j].r_margin = std::min(rep.margins[j].r_margin, dr);
    rep.margins[j].s_margin = std::min(rep.margins[j].s_margin, ds);
    ++rep.points;
    return dr >= -kMembershipSlack && ds >= -kMembershipSlack;
  };
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    rep.margins[j] = {inf, inf};
    for (double xi : test_set.abscissae()) {
      if (!check(j, xi)) ++rep.test_set_violations;
    }
    for (int i = 0; i < samples_per_cell; ++i) {
      const double xi = samples_per_cell == 1 ? 0.0 : -1.0 + 2.0 * i / (samples_per_cell - 1.0);
      const auto& ts = test_set.abscissae();
      if (std::find(ts.begin(), ts.end(), xi) != ts.end()) continue;
      if (!check(j, xi)) ++rep.off_test_violations;
    }
  }
  return rep;
}

void write_margins_csv(std::ostream& os, const DGField& field, const ScanReport& scan) {
  os << "cell_index,x,r_margin,s_margin\n";
  for (std::size_t j = 0; j < scan.margins.size(); ++j) {
    os << j << ',' << fmt12(field.mesh().center(j)) << ',' << fmt12(scan.margins[j].r_margin) << ','
       << fmt12(scan.margins[j].s_margin) << '\n';
  }
}

std::pair<double, double> riemann_window(const ExperimentPreset& preset, const WaveFan& fan, double t) {
  // The periodic wrap puts the reversed jump (right | left) at x_max = x_min.
  const WaveFan wrap = solve_riemann(fan.law, fan.right, fan.left);
  const double s = max_char_speed(fan.law, {fan.left, fan.right, wrap.middle});
  return {preset.x_min + s * t, preset.x_max - s * t};
}

RiemannRun run_riemann(const ExperimentPreset& preset, std::size_t cells, bool limiter, std::optional<int> degree) {
  const int k = degree.value_or(1);
  const Mesh mesh(preset.x_min, preset.x_max, cells);
  const InvariantRegion region = initial_region(preset, mesh);
  SchemeConfig cfg = preset_config(preset, k, region);
  cfg.limiter_enabled = limiter;
  RiemannRun out;
  out.fan = solve_riemann(region.law, preset.left, preset.right);
  out.run = run_irp(project_initial(mesh, k, preset.initial), cfg, RunControl{preset.t_final, 0, 0.0});
  out.window = riemann_window(preset, out.fan, preset.t_final);
  const WaveFan fan = out.fan;
  const double t = preset.t_final;
  const ErrorNorms e = error_norms(out.run.field, [&](double x) { return sample(fan, x / t); }, out.window, 4);
  out.l1_distance = e.l1;
  return out;
}

void write_plot_data(std::ostream& os, const DGField& field, const Reference& exact, int samples_per_cell) {
  os << "# x v_numeric u_numeric v_exact u_exact\n";
  const int n = std::max(1, samples_per_cell);
  for (std::size_t j = 0; j < field.n_cells(); ++j) {
    for (int i = 0; i < n; ++i) {
      const double xi = -1.0 + (2.0 * i + 1.0) / n;
      const double x = field.mesh().position(j, xi);
      const State w = field.evaluate(j, xi);
      const State e = exact(x);
      os << fmt12(x) << ' ' << fmt12(w.c1) << ' ' << fmt12(w.c2) << ' ' << fmt12(e.c1) << ' ' << fmt12(e.c2) << '\n';
    }
  }
}

}  // namespace irp
