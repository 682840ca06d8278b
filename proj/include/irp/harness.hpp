#pragma once

// Experiment presets, error norms, convergence tables and scans.
//
// Norm convention: the pointwise error is the Euclidean norm of the two
// component errors; L1 integrates it over the domain (composite Gauss rule),
// L-infinity takes its maximum over per-cell Gauss-Lobatto samples. The
// per-component norms are reported alongside.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irp/discretization.hpp"
#include "irp/exact.hpp"
#include "irp/schemes.hpp"

namespace irp {

enum class PresetId {
  Ex1ProjAccuracy,
  Ex2PSysAccuracy,
  Ex3ViscAccuracy,
  Ex4ViscousLimit,
  Ex5ShockRarefaction,
  Ex6RarefactionShock,
};

const char* to_string(PresetId id);
/// "ex1" .. "ex6" (also accepts the enum names). Throws InvalidConfig.
PresetId parse_preset(const std::string& name);

struct ExperimentPreset {
  PresetId id = PresetId::Ex1ProjAccuracy;
  PressureLaw law{};
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t base_cells = 32;
  double t_final = 0.1;
  int degree = 1;
  double epsilon = 0.0;
  double beta0 = 2.0;
  double beta1 = 0.25;
  DtPolicy dt_policy = DtPolicy::PaperExperiment;
  InitialCondition initial;
  /// States the region must contain exactly (extremes of the initial data).
  std::vector<State> extreme_states;
  /// Riemann data (Examples 5-6), jump at x = 0.
  bool riemann = false;
  State left{};
  State right{};
};

ExperimentPreset make_preset(PresetId id);

/// Region of the initial data: m_ref = min v and (r0, s0) = (max r, min s) over
/// dense samples plus the preset's extreme states.
InvariantRegion initial_region(const ExperimentPreset& preset, const Mesh& mesh);

/// Scheme configuration of a preset at the given degree (mode chosen from degree and epsilon).
SchemeConfig preset_config(const ExperimentPreset& preset, int degree, const InvariantRegion& region);

struct ErrorNorms {
  double linf = 0.0;
  double l1 = 0.0;
  double linf_c[2] = {0.0, 0.0};
  double l1_c[2] = {0.0, 0.0};
};

using Reference = std::function<State(double)>;

/// Errors of the field against the reference; cells outside [window_lo, window_hi]
/// (when given) are skipped.
ErrorNorms error_norms(const DGField& numeric, const Reference& reference,
                       std::optional<std::pair<double, double>> window = std::nullopt, int extra_points = 0);

struct ConvergenceRow {
  double dx = 0.0;
  double linf_error = 0.0;
  std::optional<double> linf_order;
  double l1_error = 0.0;
  std::optional<double> l1_order;
  /// Per-component (v, u) errors.
  double linf_c[2] = {0.0, 0.0};
  double l1_c[2] = {0.0, 0.0};
  std::size_t steps = 0;
  std::size_t limiter_activations = 0;
  double max_relative_drift = 0.0;
};

/// order(i) = log2(e(i-1)/e(i)).
void fill_orders(std::vector<ConvergenceRow>& rows);

struct StudySpec {
  PresetId preset = PresetId::Ex1ProjAccuracy;
  int degree = 1;
  int levels = 4;
  bool limiter = true;
  std::optional<double> epsilon;
  std::optional<double> beta0;
  std::optional<double> beta1;
  std::optional<double> gamma_t;
  std::optional<std::size_t> base_cells;
  std::optional<double> t_final;
  std::optional<DtPolicy> dt_policy;
  /// Viscous-limit studies: epsilon = dx^r per level, reference inviscid.
  std::optional<double> r_exponent;
};

struct ConvergenceTable {
  StudySpec spec;
  std::vector<ConvergenceRow> rows;
  std::size_t avg_violations = 0;
  std::size_t test_set_violations = 0;
};

ConvergenceTable convergence_table(const StudySpec& spec);
ConvergenceTable convergence_table(PresetId preset, int degree, int levels, bool limiter = true);
ConvergenceTable viscous_limit_study(int degree, double r_exponent, int levels);

/// CSV "dx,linf_error,linf_order,l1_error,l1_order" (orders empty on the first row).
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
/// Same plus per-component columns.
void write_convergence_csv_detailed(std::ostream& os, const std::vector<ConvergenceRow>& rows);

struct CellMargins {
  double r_margin = 0.0;  // min (r0 - r)
  double s_margin = 0.0;  // min (s - s0)
};

struct ScanReport {
  std::size_t test_set_violations = 0;
  std::size_t off_test_violations = 0;
  std::size_t points = 0;
  std::vector<CellMargins> margins;
};

/// Dense membership check: samples_per_cell uniform points plus the test-set points.
ScanReport violation_scan(const DGField& field, const InvariantRegion& region, int samples_per_cell,
                          const TestSet& test_set);

/// CSV "cell_index,x,r_margin,s_margin".
void write_margins_csv(std::ostream& os, const DGField& field, const ScanReport& scan);

struct RiemannRun {
  RunResult run;
  WaveFan fan;
  double l1_distance = 0.0;
  std::pair<double, double> window{};
};

/// Window of [x_min, x_max] not yet reached by the waves of the periodic-boundary jump at time t.
std::pair<double, double> riemann_window(const ExperimentPreset& preset, const WaveFan& fan, double t);

RiemannRun run_riemann(const ExperimentPreset& preset, std::size_t cells, bool limiter,
                       std::optional<int> degree = std::nullopt);

/// Whitespace-separated "x v_num u_num v_exact u_exact", samples_per_cell points per cell.
void write_plot_data(std::ostream& os, const DGField& field, const Reference& exact, int samples_per_cell);

/// Worker cap from IRP_THREADS (default: hardware concurrency, at least 1).
unsigned worker_count();

}  // namespace irp
