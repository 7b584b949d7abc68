#pragma once

// Data-parallel inner loops shared by the operator models.
//
// Every kernel has a scalar reference implementation; SIMD variants (AVX2 on
// x86-64, NEON on aarch64) are selected once at startup from CPU features.
// Elementwise kernels are bit-identical across variants (same operation
// order, no fused multiply-add). Reductions may differ by rounding only.
//
// FOCKSHIFT_KERNELS=scalar|avx2|neon forces a variant.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fockshift/common.hpp"

namespace fockshift::kernels {

struct KernelTable {
  const char* name;
  // y[j] = w[j] * x[j]
  void (*scale_into)(const double* w, const cplx* x, cplx* y, std::size_t n);
  // y[j] += w[j] * x[j]
  void (*scale_add)(const double* w, const cplx* x, cplx* y, std::size_t n);
  // y[j] += a * x[j]
  void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y[j] = (s * a[j]) * b[j]
  void (*scaled_product)(double s, const double* a, const double* b, double* y, std::size_t n);
  double (*norm_sq)(const cplx* x, std::size_t n);
  // sum_j conj(x[j]) * y[j]
  cplx (*dot)(const cplx* x, const cplx* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs_diff)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// Variant used by the wrappers below.
const KernelTable& active();
/// Force a variant by name; throws DomainError if unavailable.
void select(std::string_view name);
std::vector<std::string_view> available();

inline void scale_into(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y) {
  active().scale_into(w.data(), x.data(), y.data(), w.size());
}
inline void scale_add(std::span<const double> w, std::span<const cplx> x, std::span<cplx> y) {
  active().scale_add(w.data(), x.data(), y.data(), w.size());
}
inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void scaled_product(double s, std::span<const double> a, std::span<const double> b,
                           std::span<double> y) {
  active().scaled_product(s, a.data(), b.data(), y.data(), a.size());
}
inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double max_abs_diff(std::span<const cplx> x, std::span<const cplx> y) {
  return active().max_abs_diff(x.data(), y.data(), x.size());
}

}  // namespace fockshift::kernels
