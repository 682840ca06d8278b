#include "irp/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace irp::kernels {

const char* to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace scalar {

void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out) {
  const std::size_t rows = coeffs.size() / n_modes;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* c = coeffs.data() + r * n_modes;
    double* o = out.data() + r * n_points;
    for (std::size_t q = 0; q < n_points; ++q) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n_modes; ++m) acc += c[m] * basis[m * n_points + q];
      o[q] = acc;
    }
  }
}

void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta) {
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (std::size_t r = 0; r < rows_per_cell; ++r) {
      double* row = coeffs.data() + (j * rows_per_cell + r) * n_modes;
      for (std::size_t m = 1; m < n_modes; ++m) row[m] *= theta[j];
    }
  }
}

}  // namespace scalar

namespace {

Isa detect() {
  if (const char* env = std::getenv("IRP_SIMD"); env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return;
  current().store(isa, std::memory_order_relaxed);
}

void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out) {
  if (active_isa() == Isa::Avx2) return avx2::eval_modal(coeffs, n_modes, basis, n_points, out);
  scalar::eval_modal(coeffs, n_modes, basis, n_points, out);
}

void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z) {
  if (active_isa() == Isa::Avx2) return avx2::combine3(out, a, x, b, y, c, z);
  scalar::combine3(out, a, x, b, y, c, z);
}

void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta) {
  if (active_isa() == Isa::Avx2) return avx2::scale_modes(coeffs, n_modes, rows_per_cell, theta);
  scalar::scale_modes(coeffs, n_modes, rows_per_cell, theta);
}

}  // namespace irp::kernels
