// Scalar reference kernels. The SIMD variants are tested against these.

#include <algorithm>
#include <cmath>

#include "fockshift/kernels.hpp"

namespace fockshift::kernels {
namespace {

void scale_into(const double* w, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] = cplx(w[j] * x[j].real(), w[j] * x[j].imag());
}

void scale_add(const double* w, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    y[j] = cplx(y[j].real() + w[j] * x[j].real(), y[j].imag() + w[j] * x[j].imag());
  }
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = x[j].real(), xi = x[j].imag();
    y[j] = cplx(y[j].real() + (ar * xr - ai * xi), y[j].imag() + (ar * xi + ai * xr));
  }
}

void scaled_product(double s, const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] = (s * a[j]) * b[j];
}

double norm_sq(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += x[j].real() * x[j].real() + x[j].imag() * x[j].imag();
  return acc;
}

cplx dot(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    re += x[j].real() * y[j].real() + x[j].imag() * y[j].imag();
    im += x[j].real() * y[j].imag() - x[j].imag() * y[j].real();
  }
  return {re, im};
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += x[j];
  return acc;
}

double max_abs_diff(const cplx* x, const cplx* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dr = x[j].real() - y[j].real();
    const double di = x[j].imag() - y[j].imag();
    m = std::max(m, std::sqrt(dr * dr + di * di));
  }
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", scale_into, scale_add,    axpy, scaled_product,
                                 norm_sq,  dot,        sum,          max_abs_diff};
  return table;
}

}  // namespace fockshift::kernels
