// aarch64 only; NEON is architecturally guaranteed there.

#include <arm_neon.h>

#include "stagsrl/kernels.hpp"

namespace stagsrl::kernels {
namespace {

inline void gemm_row(std::size_t n, std::size_t k, const double* a, std::size_t astride,
                     const double* b, double* crow) {
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    float64x2_t c0 = vld1q_f64(crow + j);
    float64x2_t c1 = vld1q_f64(crow + j + 2);
    float64x2_t c2 = vld1q_f64(crow + j + 4);
    float64x2_t c3 = vld1q_f64(crow + j + 6);
    for (std::size_t p = 0; p < k; ++p) {
      const float64x2_t av = vdupq_n_f64(a[p * astride]);
      const double* brow = b + p * n + j;
      c0 = vfmaq_f64(c0, av, vld1q_f64(brow));
      c1 = vfmaq_f64(c1, av, vld1q_f64(brow + 2));
      c2 = vfmaq_f64(c2, av, vld1q_f64(brow + 4));
      c3 = vfmaq_f64(c3, av, vld1q_f64(brow + 6));
    }
    vst1q_f64(crow + j, c0);
    vst1q_f64(crow + j + 2, c1);
    vst1q_f64(crow + j + 4, c2);
    vst1q_f64(crow + j + 6, c3);
  }
  for (; j + 2 <= n; j += 2) {
    float64x2_t c0 = vld1q_f64(crow + j);
    for (std::size_t p = 0; p < k; ++p) {
      c0 = vfmaq_f64(c0, vdupq_n_f64(a[p * astride]), vld1q_f64(b + p * n + j));
    }
    vst1q_f64(crow + j, c0);
  }
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
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a + i), vld1q_f64(b + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
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
  const float64x2_t av = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void mul(std::size_t n, const double* a, const double* b, double* y) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void mul_acc(std::size_t n, const double* a, const double* b, double* y) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) y[i] += a[i] * b[i];
}

constexpr KernelTable kNeon{Backend::Neon, "neon", gemm_nn, gemm_nt, gemm_tn,
                            axpy,          mul,    mul_acc, dot};

}  // namespace

const KernelTable* neon_table_unchecked() { return &kNeon; }

}  // namespace stagsrl::kernels
