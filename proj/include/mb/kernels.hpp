#pragma once

#include <cstddef>

namespace mb::kernels {

// Hot inner loops over grid cell arrays. Every entry has a scalar reference
// implementation and, where the platform provides them, SIMD variants that
// compute the same quantity (accumulation order differs, so cross-variant
// agreement is tested to a tolerance, not bit-exactly). The dispatch is
// resolved once at startup; MB_KERNELS=scalar|avx2|neon forces a variant.
struct Ops {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  double (*max_abs)(const double* a, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
  void (*xpay)(const double* x, double alpha, double* y, std::size_t n);  // y = x + alpha*y
  void (*scale)(double alpha, double* x, std::size_t n);
  // u <- min(max(u, 0), ub) elementwise
  void (*clamp_box)(double* u, const double* ub, std::size_t n);

  // Shifted-Laplacian stencil on a row-major box (last axis contiguous):
  //   y[c] = inside01[c] * (ca*x[c] - cl * sum of the 2*ndim axis neighbours)
  // inside01 is 0.0/1.0 per cell. Cells on the box boundary are written as 0;
  // masks are built with enough padding that no interior cell sits there.
  void (*helmholtz)(const double* x, double* y, const double* inside01,
                    const int* dims, const std::ptrdiff_t* strides, int ndim,
                    double ca, double cl);
};

const Ops& scalar();
const Ops* avx2();  // nullptr when unavailable on this build/CPU
const Ops* neon();  // nullptr when unavailable on this build/CPU
const Ops& active();

}  // namespace mb::kernels
