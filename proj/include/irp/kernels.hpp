#pragma once

// Data-parallel inner loops of the DG solver. Each kernel has a scalar
// reference implementation and an AVX2/FMA variant; the variant is chosen
// once at runtime from CPUID (override with IRP_SIMD=scalar). Both variants
// agree to rounding (FMA contraction differs), which the equivalence tests
// pin at 1e-14 relative.

#include <cstddef>
#include <span>

namespace irp::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);

/// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available();
/// Currently dispatched instruction set.
Isa active_isa();
/// Forces a variant (tests and benchmarks). Forcing Avx2 when unavailable is ignored.
void set_isa(Isa isa);

/// out[r * n_points + q] = sum_m coeffs[r * n_modes + m] * basis[m * n_points + q]
/// for every row r = 0 .. coeffs.size() / n_modes - 1.
void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out);

/// out = a*x + b*y + c*z, element-wise. out may alias any input.
void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z);

/// Multiplies modes 1..n_modes-1 of every row of cell j by theta[j]
/// (rows_per_cell consecutive rows belong to one cell); mode 0 is untouched.
void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta);

namespace scalar {
void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out);
void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z);
void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta);
}  // namespace scalar

namespace avx2 {
bool compiled();
void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out);
void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z);
void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta);
}  // namespace avx2

}  // namespace irp::kernels
