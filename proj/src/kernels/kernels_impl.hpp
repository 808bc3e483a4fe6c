#pragma once

#include <cstddef>

// Per-ISA entry points. Only the scalar set is always compiled; the others
// exist when FRACSPEC_HAVE_AVX2 / FRACSPEC_HAVE_NEON are defined by the build.

#define FRACSPEC_DECLARE_KERNELS(ns)                                          \
  namespace fracspec::kernels::ns {                                           \
  double dot(const double* a, const double* b, std::size_t n);                \
  void axpy(double alpha, const double* x, double* y, std::size_t n);         \
  void gemv(const double* A, std::size_t rows, std::size_t cols,              \
            const double* x, double* y, bool accumulate);                     \
  void hadamard(const double* x, double* y, std::size_t n);                   \
  }

FRACSPEC_DECLARE_KERNELS(scalar)
#if defined(FRACSPEC_HAVE_AVX2)
FRACSPEC_DECLARE_KERNELS(avx2)
#endif
#if defined(FRACSPEC_HAVE_NEON)
FRACSPEC_DECLARE_KERNELS(neon)
#endif

#undef FRACSPEC_DECLARE_KERNELS
