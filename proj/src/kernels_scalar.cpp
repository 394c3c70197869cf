#include <algorithm>
#include <cmath>

#include "mb/kernels.hpp"

namespace mb::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}

double max_abs_scalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_scalar(const double* x, double alpha, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void clamp_box_scalar(double* u, const double* ub, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) u[i] = std::min(std::max(u[i], 0.0), ub[i]);
}

void helmholtz_scalar(const double* x, double* y, const double* inside01,
                      const int* dims, const std::ptrdiff_t* strides, int ndim,
                      double ca, double cl) {
  const int nx = dims[ndim - 1];
  int idx[3] = {0, 0, 0};
  const int nlead = ndim - 1;
  for (;;) {
    std::ptrdiff_t base = 0;
    bool boundary_row = false;
    for (int ax = 0; ax < nlead; ++ax) {
      base += idx[ax] * strides[ax];
      if (idx[ax] == 0 || idx[ax] == dims[ax] - 1) boundary_row = true;
    }
    if (boundary_row) {
      for (int i = 0; i < nx; ++i) y[base + i] = 0.0;
    } else {
      y[base] = 0.0;
      y[base + nx - 1] = 0.0;
      for (int i = 1; i < nx - 1; ++i) {
        const std::ptrdiff_t c = base + i;
        double nsum = x[c - 1] + x[c + 1];
        for (int ax = 0; ax < nlead; ++ax) nsum += x[c - strides[ax]] + x[c + strides[ax]];
        y[c] = inside01[c] * (ca * x[c] - cl * nsum);
      }
    }
    int ax = nlead - 1;
    for (; ax >= 0; --ax) {
      if (++idx[ax] < dims[ax]) break;
      idx[ax] = 0;
    }
    if (ax < 0) break;
  }
}

}  // namespace

const Ops& scalar() {
  static const Ops ops = {
      "scalar",     dot_scalar,   sum_scalar,       max_abs_scalar,
      axpy_scalar,  xpay_scalar,  scale_scalar,     clamp_box_scalar,
      helmholtz_scalar,
  };
  return ops;
}

}  // namespace mb::kernels
