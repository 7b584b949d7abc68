// NEON kernels for aarch64: one complex value per float64x2_t.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "fockshift/kernels.hpp"

namespace fockshift::kernels {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

void scale_into(const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t j = 0; j < n; ++j) {
    vst1q_f64(yd + 2 * j, vmulq_f64(vdupq_n_f64(w[j]), vld1q_f64(xd + 2 * j)));
  }
}

void scale_add(const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t prod = vmulq_f64(vdupq_n_f64(w[j]), vld1q_f64(xd + 2 * j));
    vst1q_f64(yd + 2 * j, vaddq_f64(vld1q_f64(yd + 2 * j), prod));
  }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const float64x2_t ar = vdupq_n_f64(a.real());
  // (-ai, ai) so that t2 = (-ai*xi, ai*xr)
  const float64x2_t ai = {-a.imag(), a.imag()};
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t xv = vld1q_f64(xd + 2 * j);
    const float64x2_t t1 = vmulq_f64(ar, xv);
    const float64x2_t t2 = vmulq_f64(ai, vextq_f64(xv, xv, 1));
    vst1q_f64(yd + 2 * j, vaddq_f64(vld1q_f64(yd + 2 * j), vaddq_f64(t1, t2)));
  }
}

void scaled_product(double s, const double* a, const double* b, double* y, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    vst1q_f64(y + j, vmulq_f64(vmulq_f64(sv, vld1q_f64(a + j)), vld1q_f64(b + j)));
  }
  for (; j < n; ++j) y[j] = (s * a[j]) * b[j];
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xd = as_doubles(x);
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t v = vld1q_f64(xd + 2 * j);
    acc = vaddq_f64(acc, vmulq_f64(v, v));
  }
  return vaddvq_f64(acc);
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t xv = vld1q_f64(xd + 2 * j);
    const float64x2_t yv = vld1q_f64(yd + 2 * j);
    acc_re = vaddq_f64(acc_re, vmulq_f64(xv, yv));
    acc_im = vaddq_f64(acc_im, vmulq_f64(xv, vextq_f64(yv, yv, 1)));
  }
  return {vaddvq_f64(acc_re), vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1)};
}

double sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) acc = vaddq_f64(acc, vld1q_f64(x + j));
  double total = vaddvq_f64(acc);
  for (; j < n; ++j) total += x[j];
  return total;
}

double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const float64x2_t d = vsubq_f64(vld1q_f64(xd + 2 * j), vld1q_f64(yd + 2 * j));
    m = std::max(m, std::sqrt(vaddvq_f64(vmulq_f64(d, d))));
  }
  return m;
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{"neon",  scale_into, scale_add, axpy,        scaled_product,
                                 norm_sq, dot,        sum,       max_abs_diff};
  return table;
}

}  // namespace fockshift::kernels
