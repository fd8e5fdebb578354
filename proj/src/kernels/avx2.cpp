// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "blockspec/kernels.hpp"

namespace blockspec::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Two complex numbers per register: (r0, i0, r1, i1).
cplx avx2_dot(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d same0 = _mm256_setzero_pd();  // ar*br, ai*bi
  __m256d cross0 = _mm256_setzero_pd(); // ar*bi, ai*br
  __m256d same1 = _mm256_setzero_pd();
  __m256d cross1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
    const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
    const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
    same0 = _mm256_fmadd_pd(va0, vb0, same0);
    cross0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), cross0);
    same1 = _mm256_fmadd_pd(va1, vb1, same1);
    cross1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), cross1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    same0 = _mm256_fmadd_pd(va, vb, same0);
    cross0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), cross0);
  }
  const __m256d same = _mm256_add_pd(same0, same1);
  const __m256d cross = _mm256_add_pd(cross0, cross1);
  // imaginary part: ar*bi - ai*br, i.e. even lanes minus odd lanes of `cross`
  const __m256d signs = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  double re = hsum(same);
  double im = hsum(_mm256_mul_pd(cross, signs));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void avx2_axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    const __m256d swapped = _mm256_mul_pd(_mm256_permute_pd(vx, 0b0101), ai);  // (xi*ai, xr*ai)
    const __m256d prod = _mm256_fmaddsub_pd(ar, vx, swapped);                   // (ar*xr - xi*ai, ar*xi + xr*ai)
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = {y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
            y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

double avx2_norm_sq(const cplx* x, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(p + i);
    const __m256d v1 = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += p[i] * p[i];
  return s;
}

void avx2_spmv(std::size_t rows, const std::size_t* offsets, const std::uint32_t* idx, const double* vals,
               const cplx* x, cplx* y) {
  const double* px = reinterpret_cast<const double*>(x);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t p = offsets[r];
    const std::size_t end = offsets[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; p + 2 <= end; p += 2) {
      const __m128d x0 = _mm_loadu_pd(px + 2 * static_cast<std::size_t>(idx[p]));
      const __m128d x1 = _mm_loadu_pd(px + 2 * static_cast<std::size_t>(idx[p + 1]));
      const __m256d xv = _mm256_insertf128_pd(_mm256_castpd128_pd256(x0), x1, 1);
      const __m256d w = _mm256_set_pd(vals[p + 1], vals[p + 1], vals[p], vals[p]);
      acc = _mm256_fmadd_pd(w, xv, acc);
    }
    __m128d sum = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    if (p < end) {
      const __m128d x0 = _mm_loadu_pd(px + 2 * static_cast<std::size_t>(idx[p]));
      sum = _mm_fmadd_pd(_mm_set1_pd(vals[p]), x0, sum);
    }
    _mm_storeu_pd(reinterpret_cast<double*>(y + r), sum);
  }
}

double avx2_squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", avx2_dot, avx2_axpy, avx2_norm_sq, avx2_spmv, avx2_squared_distance};
  return table;
}

}  // namespace blockspec::kernels
