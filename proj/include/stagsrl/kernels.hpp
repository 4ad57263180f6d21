#pragma once

// Dense double-precision inner loops used by the tensor library.
//
// Every kernel exists as a scalar reference (kernels_scalar.cpp) and, where the
// target supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The
// variant is chosen once at runtime from CPU capabilities; STAGSRL_SIMD=scalar
// in the environment forces the reference path. Variants agree with the
// reference to rounding (tests/test_kernels.cpp), not bit-for-bit: the SIMD
// code fuses multiply-adds and reassociates dot products.
//
// All GEMM variants accumulate into C and compute each output row from the
// matching row of the left operand only, in a fixed order, so a row's result
// does not depend on how many other rows are in the batch.

#include <cstddef>
#include <string>
#include <vector>

namespace stagsrl::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  const char* name;
  // C(m x n) += A(m x k) * B(k x n)
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c);
  // C(m x n) += A(m x k) * B(n x k)^T
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c);
  // C(m x n) += A(k x m)^T * B(k x n)
  void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
                  double* c);
  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  // y = a * b (elementwise)
  void (*mul)(std::size_t n, const double* a, const double* b, double* y);
  // y += a * b (elementwise)
  void (*mul_acc)(std::size_t n, const double* a, const double* b, double* y);
  double (*dot)(std::size_t n, const double* a, const double* b);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

const KernelTable& active();
std::vector<Backend> available_backends();
// Throws std::invalid_argument if the backend is unavailable.
void select_backend(Backend b);
std::string backend_name(Backend b);

}  // namespace stagsrl::kernels
