#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version; the active table is picked at first use from
// the CPU features, overridable with BLOCKSPEC_KERNELS=scalar|avx2.
//
// Complex vectors are std::complex<double>, i.e. interleaved (re, im) pairs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "blockspec/common.hpp"

namespace blockspec::kernels {

struct KernelTable {
  const char* name;
  /// sum_i conj(a_i) * b_i
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  /// sum_i |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  /// y_r = sum_{p in [offsets[r], offsets[r+1])} vals[p] * x[idx[p]]
  void (*spmv)(std::size_t rows, const std::size_t* offsets, const std::uint32_t* idx,
               const double* vals, const cplx* x, cplx* y);
  /// sum_i (a_i - b_i)^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 build is absent or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

const KernelTable& active();
/// Forces a table by name ("scalar", "avx2", "auto"); returns false if unavailable.
bool select(std::string_view name);

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace blockspec::kernels
