// AVX2/FMA variants of the grid kernels. Built only on x86-64; selected at
// runtime when the CPU reports avx2+fma. Same contracts as the scalar set.

#include "mb/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace mb::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double max_abs_avx2(const double* a, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(a + i)));
  __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_avx2(const double* x, double alpha, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + alpha * y[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void clamp_box_avx2(double* u, const double* ub, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_max_pd(_mm256_loadu_pd(u + i), zero);
    _mm256_storeu_pd(u + i, _mm256_min_pd(v, _mm256_loadu_pd(ub + i)));
  }
  for (; i < n; ++i) u[i] = std::min(std::max(u[i], 0.0), ub[i]);
}

void helmholtz_avx2(const double* x, double* y, const double* inside01,
                    const int* dims, const std::ptrdiff_t* strides, int ndim,
                    double ca, double cl) {
  const int nx = dims[ndim - 1];
  const __m256d vca = _mm256_set1_pd(ca);
  const __m256d vcl = _mm256_set1_pd(cl);
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
      int i = 1;
      // Interior rows only, and lanes stay within [1, nx-2]: every
      // neighbour load below is in bounds even for masked lanes.
      for (; i + 4 <= nx - 1; i += 4) {
        const std::ptrdiff_t c = base + i;
        __m256d nsum = _mm256_add_pd(_mm256_loadu_pd(x + c - 1), _mm256_loadu_pd(x + c + 1));
        for (int ax = 0; ax < nlead; ++ax)
          nsum = _mm256_add_pd(
              nsum, _mm256_add_pd(_mm256_loadu_pd(x + c - strides[ax]),
                                  _mm256_loadu_pd(x + c + strides[ax])));
        __m256d v = _mm256_fnmadd_pd(vcl, nsum, _mm256_mul_pd(vca, _mm256_loadu_pd(x + c)));
        _mm256_storeu_pd(y + c, _mm256_mul_pd(v, _mm256_loadu_pd(inside01 + c)));
      }
      for (; i < nx - 1; ++i) {
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

const Ops* avx2() {
  if (!(__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))) return nullptr;
  static const Ops ops = {
      "avx2",     dot_avx2,   sum_avx2,       max_abs_avx2,
      axpy_avx2,  xpay_avx2,  scale_avx2,     clamp_box_avx2,
      helmholtz_avx2,
  };
  return &ops;
}

}  // namespace mb::kernels

#else

namespace mb::kernels {
const Ops* avx2() { return nullptr; }
}  // namespace mb::kernels

#endif
