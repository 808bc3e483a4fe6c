#include "kernels_impl.hpp"

namespace fracspec::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x,
          double* y, bool accumulate) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double s = dot(A + i * cols, x, cols);
    y[i] = accumulate ? y[i] + s : s;
  }
}

void hadamard(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= x[i];
}

}  // namespace fracspec::kernels::scalar
