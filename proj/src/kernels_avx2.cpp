#include "irp/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define IRP_HAVE_AVX2_KERNELS 1
#define IRP_AVX2 __attribute__((target("avx2,fma")))
#else
#define IRP_HAVE_AVX2_KERNELS 0
#endif

namespace irp::kernels::avx2 {

#if IRP_HAVE_AVX2_KERNELS

namespace {

IRP_AVX2 inline __m256i tail_mask(std::size_t remaining) {
  const auto n = static_cast<long long>(remaining);
  return _mm256_set_epi64x(n > 3 ? -1 : 0, n > 2 ? -1 : 0, n > 1 ? -1 : 0, n > 0 ? -1 : 0);
}

}  // namespace

bool compiled() { return true; }

IRP_AVX2 void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                         std::size_t n_points, std::span<double> out) {
  const std::size_t rows = coeffs.size() / n_modes;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* c = coeffs.data() + r * n_modes;
    double* o = out.data() + r * n_points;
    std::size_t q = 0;
    for (; q + 4 <= n_points; q += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t m = 0; m < n_modes; ++m) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(c[m]), _mm256_loadu_pd(basis.data() + m * n_points + q), acc);
      }
      _mm256_storeu_pd(o + q, acc);
    }
    if (q < n_points) {
      const __m256i mask = tail_mask(n_points - q);
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t m = 0; m < n_modes; ++m) {
        acc = _mm256_fmadd_pd(_mm256_set1_pd(c[m]), _mm256_maskload_pd(basis.data() + m * n_points + q, mask),
                              acc);
      }
      _mm256_maskstore_pd(o + q, mask, acc);
    }
  }
}

IRP_AVX2 void combine3(std::span<double> out, double a, std::span<const double> x, double b,
                       std::span<const double> y, double c, std::span<const double> z) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d vc = _mm256_set1_pd(c);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(va, _mm256_loadu_pd(x.data() + i));
    acc = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y.data() + i), acc);
    acc = _mm256_fmadd_pd(vc, _mm256_loadu_pd(z.data() + i), acc);
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i] + c * z[i];
}

IRP_AVX2 void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                          std::span<const double> theta) {
  // One cell is a contiguous block of rows_per_cell * n_modes doubles; build
  // the per-block factor pattern once and stream it over the block.
  const std::size_t block = rows_per_cell * n_modes;
  constexpr std::size_t kMaxBlock = 64;
  if (block > kMaxBlock) return scalar::scale_modes(coeffs, n_modes, rows_per_cell, theta);
  alignas(32) double pattern[kMaxBlock];
  for (std::size_t j = 0; j < theta.size(); ++j) {
    for (std::size_t i = 0; i < block; ++i) pattern[i] = (i % n_modes == 0) ? 1.0 : theta[j];
    double* p = coeffs.data() + j * block;
    std::size_t i = 0;
    for (; i + 4 <= block; i += 4) {
      _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), _mm256_load_pd(pattern + i)));
    }
    if (i < block) {
      const __m256i mask = tail_mask(block - i);
      _mm256_maskstore_pd(p + i, mask, _mm256_mul_pd(_mm256_maskload_pd(p + i, mask), _mm256_load_pd(pattern + i)));
    }
  }
}

#else

bool compiled() { return false; }

void eval_modal(std::span<const double> coeffs, std::size_t n_modes, std::span<const double> basis,
                std::size_t n_points, std::span<double> out) {
  scalar::eval_modal(coeffs, n_modes, basis, n_points, out);
}

void combine3(std::span<double> out, double a, std::span<const double> x, double b,
              std::span<const double> y, double c, std::span<const double> z) {
  scalar::combine3(out, a, x, b, y, c, z);
}

void scale_modes(std::span<double> coeffs, std::size_t n_modes, std::size_t rows_per_cell,
                 std::span<const double> theta) {
  scalar::scale_modes(coeffs, n_modes, rows_per_cell, theta);
}

#endif

}  // namespace irp::kernels::avx2
