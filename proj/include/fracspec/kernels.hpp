#pragma once

// Dense double-precision inner loops used by the network passes and the
// residual operators. Every kernel has a scalar reference implementation and
// optional AVX2/FMA and NEON variants; the active table is picked once at
// runtime from the host CPU (override with FRACSPEC_ISA=scalar|avx2|neon).
//
// All matrices are row-major and densely packed (leading dimension = cols).

#include <cstddef>
#include <span>
#include <string_view>

namespace fracspec::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] = sum_j A[i][j] x[j]  (+ y[i] when accumulate)
  void (*gemv)(const double* A, std::size_t rows, std::size_t cols,
               const double* x, double* y, bool accumulate);
  // y[i] *= x[i]
  void (*hadamard)(const double* x, double* y, std::size_t n);
};

bool isa_available(Isa isa) noexcept;

/// Table for a specific instruction set. Throws std::invalid_argument when the
/// variant was not compiled in or the CPU lacks it.
const KernelTable& table_for(Isa isa);

/// The table selected for this process.
const KernelTable& active();

// Convenience wrappers over active().

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline void gemv(const double* A, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> y,
                 bool accumulate = false) {
  active().gemv(A, rows, cols, x.data(), y.data(), accumulate);
}

// Composites built from the primitives of a given table.

// y[j] += sum_i A[i][j] x[i]
void gemv_t(const KernelTable& k, const double* A, std::size_t rows,
            std::size_t cols, const double* x, double* y);

// A[i][j] += alpha * x[i] * y[j]
void rank1(const KernelTable& k, double* A, std::size_t rows, std::size_t cols,
           double alpha, const double* x, const double* y);

// C (m x n) += alpha * A (m x p) * B (p x n)
void gemm_nn(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C);

// C (m x n) += alpha * A (m x p) * B^T, B is (n x p)
void gemm_nt(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C);

// C (m x n) += alpha * A^T * B, A is (p x m), B is (p x n)
void gemm_tn(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C);

}  // namespace fracspec::kernels
