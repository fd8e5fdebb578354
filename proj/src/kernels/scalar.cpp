#include "blockspec/kernels.hpp"

namespace blockspec::kernels {
namespace {

cplx scalar_dot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void scalar_axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
  }
}

double scalar_norm_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void scalar_spmv(std::size_t rows, const std::size_t* offsets, const std::uint32_t* idx, const double* vals,
                 const cplx* x, cplx* y) {
  for (std::size_t r = 0; r < rows; ++r) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      re += vals[p] * x[idx[p]].real();
      im += vals[p] * x[idx[p]].imag();
    }
    y[r] = {re, im};
  }
}

double scalar_squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", scalar_dot, scalar_axpy, scalar_norm_sq, scalar_spmv,
                                 scalar_squared_distance};
  return table;
}

}  // namespace blockspec::kernels
