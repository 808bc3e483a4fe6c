// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace fracspec::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4),
                           acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x,
          double* y, bool accumulate) {
  std::size_t r = 0;
  // Four rows at a time share each load of x.
  for (; r + 4 <= rows; r += 4) {
    const double* a0 = A + r * cols;
    const double* a1 = a0 + cols;
    const double* a2 = a1 + cols;
    const double* a3 = a2 + cols;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      const __m256d vx = _mm256_loadu_pd(x + j);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + j), vx, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + j), vx, s1);
      s2 = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + j), vx, s2);
      s3 = _mm256_fmadd_pd(_mm256_loadu_pd(a3 + j), vx, s3);
    }
    double t0 = hsum(s0), t1 = hsum(s1), t2 = hsum(s2), t3 = hsum(s3);
    for (; j < cols; ++j) {
      t0 += a0[j] * x[j];
      t1 += a1[j] * x[j];
      t2 += a2[j] * x[j];
      t3 += a3[j] * x[j];
    }
    if (accumulate) {
      y[r] += t0;
      y[r + 1] += t1;
      y[r + 2] += t2;
      y[r + 3] += t3;
    } else {
      y[r] = t0;
      y[r + 1] = t1;
      y[r + 2] = t2;
      y[r + 3] = t3;
    }
  }
  for (; r < rows; ++r) {
    const double s = dot(A + r * cols, x, cols);
    y[r] = accumulate ? y[r] + s : s;
  }
}

void hadamard(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i,
                     _mm256_mul_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] *= x[i];
}

}  // namespace fracspec::kernels::avx2
