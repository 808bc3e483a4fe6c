#include "fracspec/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace fracspec::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::dot, &scalar::axpy,
                              &scalar::gemv, &scalar::hadamard};
#if defined(FRACSPEC_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::dot, &avx2::axpy, &avx2::gemv,
                            &avx2::hadamard};
#endif
#if defined(FRACSPEC_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &neon::dot, &neon::axpy, &neon::gemv,
                            &neon::hadamard};
#endif

bool cpu_has_avx2() noexcept {
#if defined(FRACSPEC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("FRACSPEC_ISA")) {
    const std::string want(env);
    if (want == "scalar") return kScalar;
    if (want == "avx2" && isa_available(Isa::avx2)) return table_for(Isa::avx2);
    if (want == "neon" && isa_available(Isa::neon)) return table_for(Isa::neon);
  }
  if (isa_available(Isa::avx2)) return table_for(Isa::avx2);
  if (isa_available(Isa::neon)) return table_for(Isa::neon);
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
    case Isa::neon:
#if defined(FRACSPEC_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel variant not available: " +
                                std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(FRACSPEC_HAVE_AVX2)
    case Isa::avx2: return kAvx2;
#endif
#if defined(FRACSPEC_HAVE_NEON)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

void gemv_t(const KernelTable& k, const double* A, std::size_t rows,
            std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    k.axpy(x[i], A + i * cols, y, cols);
  }
}

void rank1(const KernelTable& k, double* A, std::size_t rows, std::size_t cols,
           double alpha, const double* x, const double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    k.axpy(alpha * x[i], y, A + i * cols, cols);
  }
}

void gemm_nn(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C) {
  for (std::size_t i = 0; i < m; ++i) {
    double* c = C + i * n;
    for (std::size_t l = 0; l < p; ++l) {
      k.axpy(alpha * A[i * p + l], B + l * n, c, n);
    }
  }
}

void gemm_nt(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      C[i * n + j] += alpha * k.dot(A + i * p, B + j * p, p);
    }
  }
}

void gemm_tn(const KernelTable& k, std::size_t m, std::size_t p, std::size_t n,
             double alpha, const double* A, const double* B, double* C) {
  for (std::size_t l = 0; l < p; ++l) {
    const double* a = A + l * m;
    const double* b = B + l * n;
    for (std::size_t i = 0; i < m; ++i) {
      k.axpy(alpha * a[i], b, C + i * n, n);
    }
  }
}

}  // namespace fracspec::kernels
