#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "irp/exact.hpp"
#include "irp/format.hpp"
#include "irp/kernels.hpp"
#include "irp/limiter.hpp"

namespace irp::cli {

namespace fs = std::filesystem;

namespace {

const char* const kCommands[] = {"run", "table", "riemann", "scan", "theta"};

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

State parse_state(const std::string& text, const std::string& flag) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, comma), &used);
    const double b = std::stod(text.substr(comma + 1));
    return {a, b};
  } catch (const std::exception&) {
    throw UsageError("--" + flag + ": expected 'c1,c2', got '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines -> "--key value" pairs.
std::vector<std::string> config_args(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "command") {
      if (value != command) throw UsageError(path + ": config is for command '" + value + "', not '" + command + "'");
      continue;
    }
    if (key == "config") throw UsageError(path + ": nested config files are not supported");
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

}  // namespace

RunSpec parse_config(const std::vector<std::string>& args_in) {
  if (args_in.empty()) throw UsageError("missing command (run | table | riemann | scan | theta)");
  std::vector<std::string> args = args_in;
  const std::string command = args[0];
  if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands)) {
    throw UsageError("unknown command '" + command + "'");
  }

  // Splice config-file values in front of the command-line flags so the latter win.
  std::vector<std::string> cli_flags(args.begin() + 1, args.end());
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < cli_flags.size(); ++i) {
    std::string path;
    if (cli_flags[i] == "--config") {
      if (i + 1 >= cli_flags.size()) throw UsageError("--config needs a file");
      path = cli_flags[i + 1];
      cli_flags.erase(cli_flags.begin() + static_cast<long>(i), cli_flags.begin() + static_cast<long>(i) + 2);
      --i;
    } else if (cli_flags[i].rfind("--config=", 0) == 0) {
      path = cli_flags[i].substr(9);
      cli_flags.erase(cli_flags.begin() + static_cast<long>(i));
      --i;
    } else {
      continue;
    }
    auto extra = config_args(path, command);
    from_file.insert(from_file.end(), extra.begin(), extra.end());
  }

  RunSpec spec;
  spec.command = command;
  std::string left, right;
  CLI::App app{"irp-cli: " + command};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--preset", spec.preset, "ex1 .. ex6");
  app.add_option("--system", spec.system, "psystem | euler | shallow")
      ->check(CLI::IsMember({"psystem", "euler", "shallow"}));
  app.add_option("--gamma", spec.gamma, "adiabatic exponent (gravity for shallow water)");
  app.add_option("--k-const", spec.k_const, "pressure constant k");
  app.add_option("--degree", spec.degree, "polynomial degree 0..2")->check(CLI::Range(0, 2));
  app.add_option("--epsilon", spec.epsilon, "viscosity");
  app.add_option("--beta0", spec.beta0, "DDG jump coefficient");
  app.add_option("--beta1", spec.beta1, "DDG second-derivative coefficient");
  app.add_option("--gamma-t", spec.gamma_t, "interior test abscissa");
  app.add_option("--cells", spec.cells, "number of cells");
  app.add_option("--levels", spec.levels, "refinement levels")->check(CLI::PositiveNumber);
  app.add_option("--t-final", spec.t_final, "final time");
  app.add_option("--dt-policy", spec.dt_policy, "theorem | paper")->check(CLI::IsMember({"theorem", "paper"}));
  app.add_option("--limiter", spec.limiter, "on | off | both")->check(CLI::IsMember({"on", "off", "both"}));
  app.add_option("--cfl-mode", spec.cfl_mode, "auto | first-order | high-order | viscous-second | viscous-third")
      ->check(CLI::IsMember({"auto", "first-order", "high-order", "viscous-second", "viscous-third"}));
  app.add_option("--out", spec.out, "output directory");
  app.add_option("--left", left, "left Riemann state v,u");
  app.add_option("--right", right, "right Riemann state v,u");
  app.add_option("--t", spec.t, "sampling time of the exact solution");
  app.add_option("--samples", spec.samples, "number of exact-solution samples");

  std::vector<std::string> all = from_file;
  all.insert(all.end(), cli_flags.begin(), cli_flags.end());
  std::reverse(all.begin(), all.end());
  try {
    app.parse(all);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  if (!left.empty()) spec.left = parse_state(left, "left");
  if (!right.empty()) spec.right = parse_state(right, "right");
  if (spec.limiter.empty()) spec.limiter = command == "table" ? "both" : "on";
  if (spec.limiter == "both" && command != "table") throw UsageError("--limiter both is only valid for table");
  return spec;
}

std::string to_config(const RunSpec& s) {
  std::ostringstream os;
  os << "command=" << s.command << '\n';
  if (!s.preset.empty()) os << "preset=" << s.preset << '\n';
  os << "system=" << s.system << '\n';
  os << "gamma=" << fmt17(s.gamma) << '\n';
  os << "k-const=" << fmt17(s.k_const) << '\n';
  os << "degree=" << s.degree << '\n';
  if (s.epsilon) os << "epsilon=" << fmt17(*s.epsilon) << '\n';
  os << "beta0=" << fmt17(s.beta0) << '\n';
  os << "beta1=" << fmt17(s.beta1) << '\n';
  if (s.gamma_t) os << "gamma-t=" << fmt17(*s.gamma_t) << '\n';
  if (s.cells) os << "cells=" << *s.cells << '\n';
  os << "levels=" << s.levels << '\n';
  if (s.t_final) os << "t-final=" << fmt17(*s.t_final) << '\n';
  os << "dt-policy=" << s.dt_policy << '\n';
  os << "limiter=" << s.limiter << '\n';
  os << "cfl-mode=" << s.cfl_mode << '\n';
  os << "out=" << s.out << '\n';
  if (s.left) os << "left=" << fmt17(s.left->c1) << ',' << fmt17(s.left->c2) << '\n';
  if (s.right) os << "right=" << fmt17(s.right->c1) << ',' << fmt17(s.right->c2) << '\n';
  os << "t=" << fmt17(s.t) << '\n';
  os << "samples=" << s.samples << '\n';
  return os.str();
}

ExperimentPreset resolve_preset(const RunSpec& spec) {
  ExperimentPreset p;
  if (!spec.preset.empty()) {
    try {
      p = make_preset(parse_preset(spec.preset));
    } catch (const Error& e) {
      throw UsageError(std::string("--preset: ") + e.what());
    }
  } else if (spec.left && spec.right) {
    p = make_preset(PresetId::Ex5ShockRarefaction);
  } else {
    throw UsageError(spec.command + " needs --preset or both --left and --right");
  }
  if (spec.left || spec.right) {
    if (!p.riemann) throw UsageError("--left/--right apply to Riemann presets (ex5, ex6) only");
    if (spec.left) p.left = *spec.left;
    if (spec.right) p.right = *spec.right;
    const State l = p.left, r = p.right;
    p.initial = [l, r](double x) { return x < 0.0 ? l : r; };
    p.extreme_states = {l, r};
  }
  if (spec.system == "psystem") {
    p.law = PressureLaw::psystem(spec.gamma, spec.k_const, p.law.m_ref);
  } else if (spec.system == "euler") {
    p.law = PressureLaw::eulerian(spec.gamma, spec.k_const);
  } else {
    p.law = PressureLaw::shallow_water(spec.gamma);
  }
  if (spec.epsilon) p.epsilon = *spec.epsilon;
  p.beta0 = spec.beta0;
  p.beta1 = spec.beta1;
  if (spec.cells) p.base_cells = *spec.cells;
  if (spec.t_final) p.t_final = *spec.t_final;
  p.dt_policy = spec.dt_policy == "theorem" ? DtPolicy::TheoremBound : DtPolicy::PaperExperiment;
  if (!(p.epsilon >= 0.0)) throw UsageError("--epsilon must be >= 0");
  if (p.base_cells == 0) throw UsageError("--cells must be positive");
  return p;
}

SchemeConfig resolve_scheme(const RunSpec& spec, const ExperimentPreset& preset, const InvariantRegion& region) {
  SchemeConfig c = preset_config(preset, spec.degree, region);
  c.gamma_t = spec.gamma_t;
  c.limiter_enabled = spec.limiter != "off";
  if (spec.cfl_mode == "first-order") c.cfl_mode = CflMode::FirstOrder;
  if (spec.cfl_mode == "high-order") c.cfl_mode = CflMode::HighOrderConvective;
  if (spec.cfl_mode == "viscous-second") c.cfl_mode = CflMode::ViscousSecond;
  if (spec.cfl_mode == "viscous-third") c.cfl_mode = CflMode::ViscousThird;
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    os << content;
    if (!os) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
    files_.emplace_back(name, sha256_hex(content));
  }

  void manifest() {
    std::ostringstream os;
    for (const auto& [name, sum] : files_) os << sum << "  " << name << '\n';
    const fs::path path = dir_ / "MANIFEST.sha256";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << os.str();
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string limiter_tag(bool on) { return on ? "limiter-on" : "limiter-off"; }

int cmd_run(const RunSpec& spec, Outputs& outs, std::ostream& out, std::ostream& err) {
  const ExperimentPreset p = resolve_preset(spec);
  const Mesh mesh(p.x_min, p.x_max, p.base_cells);
  const InvariantRegion region = initial_region(p, mesh);
  const SchemeConfig cfg = resolve_scheme(spec, p, region);
  const DGField f0 = project_initial(mesh, spec.degree, p.initial);

  RunResult res;
  try {
    res = run_irp(f0, cfg, RunControl{p.t_final, 0, 0.0});
  } catch (const Error& e) {
    const std::string report = std::string("violation: ") + e.what() + "\n";
    outs.write("violations.txt", report);
    err << report;
    return 1;
  }
  std::ostringstream log, plot, chk;
  write_run_log(log, res);
  outs.write("run_log.csv", log.str());
  write_field(chk, res.field);
  outs.write("final_field.txt", chk.str());

  Reference exact = [](double) { return State{std::nan(""), std::nan("")}; };
  std::optional<WaveFan> fan;
  if (p.riemann && p.law.kind == SystemKind::PSystem) {
    fan = solve_riemann(region.law, p.left, p.right);
    const double t = res.t;
    exact = [fan, t, &p](double x) { return t > 0.0 ? sample(*fan, x / t) : p.initial(x); };
  } else if (p.t_final == 0.0) {
    exact = p.initial;
  }
  write_plot_data(plot, res.field, exact, 4);
  outs.write("solution.dat", plot.str());

  out << "steps=" << res.steps << " t=" << fmt12(res.t) << " max_relative_drift=" << fmt12(res.max_relative_drift)
      << " avg_violations=" << res.avg_violations << " test_set_violations=" << res.test_set_violations << '\n';
  if (fan) {
    const auto window = riemann_window(p, *fan, res.t);
    const double t = res.t;
    const ErrorNorms e =
        error_norms(res.field, [&](double x) { return sample(*fan, x / t); }, window, 4);
    out << "l1_distance_to_exact=" << fmt12(e.l1) << " window=[" << fmt12(window.first) << ','
        << fmt12(window.second) << "]\n";
  }
  if (res.avg_violations + res.test_set_violations > 0) {
    std::ostringstream rep;
    rep << "avg_violations=" << res.avg_violations << "\ntest_set_violations=" << res.test_set_violations << '\n';
    outs.write("violations.txt", rep.str());
    err << "invariant violations recorded\n";
    return 1;
  }
  return 0;
}

int cmd_table(const RunSpec& spec, Outputs& outs, std::ostream& out) {
  const ExperimentPreset p = resolve_preset(spec);
  if (p.riemann) throw UsageError("table needs a smooth preset (ex1 .. ex4)");
  {
    // Validate parameters before any compute.
    const Mesh mesh(p.x_min, p.x_max, p.base_cells);
    resolve_scheme(spec, p, initial_region(p, mesh));
  }
  std::vector<bool> settings;
  if (spec.limiter == "both" || spec.limiter == "off") settings.push_back(false);
  if (spec.limiter == "both" || spec.limiter == "on") settings.push_back(true);
  std::size_t violations = 0;
  for (bool lim : settings) {
    StudySpec s;
    s.preset = p.id;
    s.degree = spec.degree;
    s.levels = spec.levels;
    s.limiter = lim;
    s.epsilon = p.epsilon;
    s.beta0 = p.beta0;
    s.beta1 = p.beta1;
    s.gamma_t = spec.gamma_t;
    s.base_cells = p.base_cells;
    s.t_final = p.t_final;
    s.dt_policy = p.dt_policy;
    const ConvergenceTable t = convergence_table(s);
    std::ostringstream csv, detail;
    write_convergence_csv(csv, t.rows);
    write_convergence_csv_detailed(detail, t.rows);
    const std::string stem = "table_" + std::string(to_string(p.id)) + "_P" + std::to_string(spec.degree) + "_" +
                             limiter_tag(lim);
    outs.write(stem + ".csv", csv.str());
    outs.write(stem + "_detail.csv", detail.str());
    out << "# " << stem << '\n' << csv.str();
    violations += t.avg_violations + (lim ? t.test_set_violations : 0);
  }
  return violations > 0 ? 1 : 0;
}

int cmd_riemann(const RunSpec& spec, Outputs& outs, std::ostream& out) {
  ExperimentPreset p = resolve_preset(spec);
  if (p.law.kind != SystemKind::PSystem) throw UsageError("riemann supports --system psystem only");
  if (!p.riemann) throw UsageError("riemann needs Riemann data (ex5, ex6 or --left/--right)");
  const WaveFan fan = solve_riemann(p.law, p.left, p.right);
  auto kind = [](const Wave& w) { return w.is_shock() ? "shock" : "rarefaction"; };
  out << "middle=" << fmt12(fan.middle.c1) << ',' << fmt12(fan.middle.c2) << '\n'
      << "back=" << kind(fan.back) << " speeds=" << fmt12(fan.back.speed_lo) << ',' << fmt12(fan.back.speed_hi) << '\n'
      << "front=" << kind(fan.front) << " speeds=" << fmt12(fan.front.speed_lo) << ',' << fmt12(fan.front.speed_hi)
      << '\n';
  std::ostringstream csv;
  write_fan_csv(csv, fan, 0.0, spec.t, p.x_min, p.x_max, spec.samples);
  outs.write("riemann.csv", csv.str());
  return 0;
}

int cmd_scan(const RunSpec& spec, Outputs& outs, std::ostream& out, std::ostream& err) {
  const ExperimentPreset p = resolve_preset(spec);
  const Mesh mesh(p.x_min, p.x_max, p.base_cells);
  const InvariantRegion region = initial_region(p, mesh);
  const SchemeConfig cfg = resolve_scheme(spec, p, region);
  RunResult res;
  try {
    res = run_irp(project_initial(mesh, spec.degree, p.initial), cfg, RunControl{p.t_final, 0, 0.0});
  } catch (const Error& e) {
    err << "violation: " << e.what() << '\n';
    return 1;
  }
  const ScanReport scan = violation_scan(res.field, region, 16, test_set_for(cfg));
  std::ostringstream csv;
  write_margins_csv(csv, res.field, scan);
  outs.write("margins.csv", csv.str());
  out << "points=" << scan.points << " test_set_violations=" << scan.test_set_violations
      << " off_test_violations=" << scan.off_test_violations << '\n';
  return cfg.limiter_enabled && scan.test_set_violations > 0 ? 1 : 0;
}

int cmd_theta(const RunSpec& spec, Outputs& outs, std::ostream& out) {
  const ExperimentPreset p = resolve_preset(spec);
  const Mesh mesh(p.x_min, p.x_max, p.base_cells);
  const InvariantRegion region = initial_region(p, mesh);
  const SchemeConfig cfg = resolve_scheme(spec, p, region);
  const LimitedField lf = limit_field(project_initial(mesh, spec.degree, p.initial), region, test_set_for(cfg));
  std::ostringstream csv;
  write_reports_csv(csv, lf.reports);
  outs.write("theta.csv", csv.str());
  std::size_t active = 0;
  double min_theta = 1.0;
  for (const auto& r : lf.reports) {
    active += r.activated ? 1 : 0;
    min_theta = std::min(min_theta, r.theta);
  }
  out << "cells=" << lf.reports.size() << " activated=" << active << " min_theta=" << fmt12(min_theta) << '\n';
  return 0;
}

}  // namespace

int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  const std::string header = to_config(spec);
  out << "# irp-cli reproducibility header (simd=" << kernels::to_string(kernels::active_isa()) << ")\n"
      << header << "# end header\n";
  try {
    Outputs outs(spec.out);
    outs.write("run_spec.cfg", header);
    int code = 0;
    if (spec.command == "run") code = cmd_run(spec, outs, out, err);
    if (spec.command == "table") code = cmd_table(spec, outs, out);
    if (spec.command == "riemann") code = cmd_riemann(spec, outs, out);
    if (spec.command == "scan") code = cmd_scan(spec, outs, out, err);
    if (spec.command == "theta") code = cmd_theta(spec, outs, out);
    outs.manifest();
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? 4 : 3;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << "usage: irp-cli <run|table|riemann|scan|theta> [--preset exN] [--config FILE] [flags]\n"
                 "  flags: --system --gamma --k-const --degree --epsilon --beta0 --beta1 --gamma-t --cells\n"
                 "         --levels --t-final --dt-policy {theorem|paper} --limiter {on|off|both}\n"
                 "         --cfl-mode --out DIR --left v,u --right v,u --t --samples\n"
                 "  env:   IRP_THREADS caps worker threads, IRP_SIMD=scalar disables AVX2 kernels\n";
    return args.empty() ? 2 : 0;
  }
  RunSpec spec;
  try {
    spec = parse_config(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return execute(spec, std::cout, std::cerr);
}

}  // namespace irp::cli
