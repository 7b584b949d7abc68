// AVX2 kernels. Complex arrays are read as interleaved (re, im) doubles, two
// complex values per 256-bit register. Elementwise kernels perform the same
// multiplications and additions as the scalar reference, in the same order.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "fockshift/kernels.hpp"

namespace fockshift::kernels {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// (w0, w0, w1, w1)
inline __m256d spread_pair(const double* w) {
  const __m256d v = _mm256_castpd128_pd256(_mm_loadu_pd(w));
  return _mm256_permute4x64_pd(v, 0b01010000);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void scale_into(const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    _mm256_storeu_pd(yd + 2 * j, _mm256_mul_pd(spread_pair(w + j), _mm256_loadu_pd(xd + 2 * j)));
  }
  for (; j < n; ++j) y[j] = cplx(w[j] * x[j].real(), w[j] * x[j].imag());
}

void scale_add(const double* w, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d prod = _mm256_mul_pd(spread_pair(w + j), _mm256_loadu_pd(xd + 2 * j));
    _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * j), prod));
  }
  for (; j < n; ++j) {
    y[j] = cplx(y[j].real() + w[j] * x[j].real(), y[j].imag() + w[j] * x[j].imag());
  }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
    const __m256d t1 = _mm256_mul_pd(ar, xv);
    const __m256d t2 = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0b0101));
    const __m256d ax = _mm256_addsub_pd(t1, t2);
    _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * j), ax));
  }
  const double rr = a.real(), ii = a.imag();
  for (; j < n; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    y[j] = cplx(y[j].real() + (rr * xr - ii * xi), y[j].imag() + (rr * xi + ii * xr));
  }
}

void scaled_product(double s, const double* a, const double* b, double* y, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d sa = _mm256_mul_pd(sv, _mm256_loadu_pd(a + j));
    _mm256_storeu_pd(y + j, _mm256_mul_pd(sa, _mm256_loadu_pd(b + j)));
  }
  for (; j < n; ++j) y[j] = (s * a[j]) * b[j];
}

double norm_sq(const cplx* x, std::size_t n) {
  const double* xd = as_doubles(x);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= m; j += 8) {
    const __m256d v0 = _mm256_loadu_pd(xd + j);
    const __m256d v1 = _mm256_loadu_pd(xd + j + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(v0, v0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(v1, v1));
  }
  double total = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < m; ++j) total += xd[j] * xd[j];
  return total;
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * j);
    acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(xv, yv));
    // (xr*yi, xi*yr) per complex lane
    acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(xv, _mm256_permute_pd(yv, 0b0101)));
  }
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  double re = hsum(acc_re);
  double im = (im_lanes[0] + im_lanes[2]) - (im_lanes[1] + im_lanes[3]);
  for (; j < n; ++j) {
    re += x[j].real() * y[j].real() + x[j].imag() * y[j].imag();
    im += x[j].real() * y[j].imag() - x[j].imag() * y[j].real();
  }
  return {re, im};
}

double sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + j));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + j + 4));
  }
  double total = hsum(_mm256_add_pd(acc0, acc1));
  for (; j < n; ++j) total += x[j];
  return total;
}

double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d best = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xd + 2 * j), _mm256_loadu_pd(yd + 2 * j));
    const __m256d sq = _mm256_mul_pd(d, d);
    // (|d0|^2, |d0|^2, |d1|^2, |d1|^2)
    const __m256d mod2 = _mm256_hadd_pd(sq, sq);
    best = _mm256_max_pd(best, mod2);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m = std::sqrt(std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3])));
  for (; j < n; ++j) {
    const double dr = x[j].real() - y[j].real();
    const double di = x[j].imag() - y[j].imag();
    m = std::max(m, std::sqrt(dr * dr + di * di));
  }
  return m;
}

}  // namespace

// Feature detection lives in dispatch.cpp, which is compiled for the baseline ISA.
const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2",  scale_into, scale_add, axpy,        scaled_product,
                                 norm_sq, dot,        sum,       max_abs_diff};
  return table;
}

}  // namespace fockshift::kernels
