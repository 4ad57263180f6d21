// Compiled with -mavx2 -mfma. Only reached through avx2_table(), which checks
// the CPU first.

#include <immintrin.h>

#include "stagsrl/kernels.hpp"

namespace stagsrl::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// C row block [j0, j0+16) += sum_p a(p) * B[p, j0..]; `astride` steps through A.
inline void row_block16(std::size_t n, std::size_t k, const double* a, std::size_t astride,
                        const double* b, double* crow, std::size_t j0) {
  __m256d c0 = _mm256_loadu_pd(crow + j0);
  __m256d c1 = _mm256_loadu_pd(crow + j0 + 4);
  __m256d c2 = _mm256_loadu_pd(crow + j0 + 8);
  __m256d c3 = _mm256_loadu_pd(crow + j0 + 12);
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d av = _mm256_set1_pd(a[p * astride]);
    const double* brow = b + p * n + j0;
    c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), c0);
    c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), c1);
    c2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 8), c2);
    c3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 12), c3);
  }
  _mm256_storeu_pd(crow + j0, c0);
  _mm256_storeu_pd(crow + j0 + 4, c1);
  _mm256_storeu_pd(crow + j0 + 8, c2);
  _mm256_storeu_pd(crow + j0 + 12, c3);
}

inline void row_block4(std::size_t n, std::size_t k, const double* a, std::size_t astride,
                       const double* b, double* crow, std::size_t j0) {
  __m256d c0 = _mm256_loadu_pd(crow + j0);
  for (std::size_t p = 0; p < k; ++p) {
    c0 = _mm256_fmadd_pd(_mm256_set1_pd(a[p * astride]), _mm256_loadu_pd(b + p * n + j0), c0);
  }
  _mm256_storeu_pd(crow + j0, c0);
}

// One output row of A*B where A's row elements sit at a[p * astride].
inline void gemm_row(std::size_t n, std::size_t k, const double* a, std::size_t astride,
                     const double* b, double* crow) {
  std::size_t j = 0;
  for (; j + 16 <= n; j += 16) row_block16(n, k, a, astride, b, crow, j);
  for (; j + 4 <= n; j += 4) row_block4(n, k, a, astride, b, crow, j);
  for (; j < n; ++j) {
    double s = crow[j];
    for (std::size_t p = 0; p < k; ++p) s += a[p * astride] * b[p * n + j];
    crow[j] = s;
  }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c) {
  for (std::size_t i = 0; i < m; ++i) gemm_row(n, k, a + i * k, 1, b, c + i * n);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c) {
  for (std::size_t i = 0; i < m; ++i) gemm_row(n, k, a + i, m, b, c + i * n);
}

double dot(std::size_t n, const double* a, const double* b) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += dot(k, a + i * k, b + j * k);
  }
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul(std::size_t n, const double* a, const double* b, double* y) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void mul_acc(std::size_t n, const double* a, const double* b, double* y) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a[i] * b[i];
}

constexpr KernelTable kAvx2{Backend::Avx2, "avx2", gemm_nn, gemm_nt, gemm_tn,
                            axpy,          mul,    mul_acc, dot};

}  // namespace

const KernelTable* avx2_table_unchecked() { return &kAvx2; }

}  // namespace stagsrl::kernels
