#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace irp {

enum class ErrorCode {
  NonPositiveVolume,
  EmptySamples,
  NoIntersection,
  AverageOutsideInterior,
  ThetaOutOfRange,
  InvalidOrder,
  XiOutOfRange,
  InvalidDecomposition,
  CFLViolation,
  DegenerateSigma,
  NegativeCoefficient,
  NegativeRadicand,
  NoSolution,
  EmptyStencil,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> cell = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), cell_(cell) {}

  ErrorCode code() const noexcept { return code_; }
  /// Offending cell index, when the failure is tied to one.
  std::optional<std::size_t> cell() const noexcept { return cell_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> cell_;
};

}  // namespace irp
