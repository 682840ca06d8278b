#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irp/harness.hpp"
#include "irp/schemes.hpp"

namespace irp::cli {

/// Bad flags, unknown config keys or parameters outside the certified ranges.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved command line. Unset optionals fall back to preset values.
struct RunSpec {
  std::string command;
  std::string preset;
  std::string system = "psystem";
  double gamma = 1.4;
  double k_const = 1.0;
  int degree = 1;
  std::optional<double> epsilon;
  double beta0 = 2.0;
  double beta1 = 0.25;
  std::optional<double> gamma_t;
  std::optional<std::size_t> cells;
  int levels = 4;
  std::optional<double> t_final;
  std::string dt_policy = "paper";
  /// on | off | both (both: table only).
  std::string limiter;
  std::string cfl_mode = "auto";
  std::string out = "irp-out";
  std::optional<State> left;
  std::optional<State> right;
  double t = 0.1;
  std::size_t samples = 512;

  bool operator==(const RunSpec&) const = default;
};

/// Parses "<command> [flags]" (program name excluded). A --config file of
/// key=value lines supplies defaults; flags on the command line win.
RunSpec parse_config(const std::vector<std::string>& args);

/// key=value lines (one per set field) that parse back to the same spec.
std::string to_config(const RunSpec& spec);

/// Preset after applying the spec's overrides.
ExperimentPreset resolve_preset(const RunSpec& spec);
/// Scheme configuration, validated. Throws UsageError on invalid parameters.
SchemeConfig resolve_scheme(const RunSpec& spec, const ExperimentPreset& preset, const InvariantRegion& region);

/// Runs the command, writing artifacts under spec.out. Returns the exit code.
int execute(const RunSpec& spec, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

int main_entry(int argc, char** argv);

}  // namespace irp::cli
