#include "doctest.h"
#include "stagsrl/kernels.hpp"
#include "stagsrl/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace stagsrl;
namespace kn = stagsrl::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1, 1);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-12) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= tol * std::max(1.0, std::abs(a[i])));
  }
}

std::vector<const kn::KernelTable*> variants() {
  std::vector<const kn::KernelTable*> out;
  if (kn::avx2_table()) out.push_back(kn::avx2_table());
  if (kn::neon_table()) out.push_back(kn::neon_table());
  return out;
}

// Naive triple loops, independent of the kernel library.
std::vector<double> ref_gemm(std::size_t m, std::size_t n, std::size_t k, const std::vector<double>& a,
                             bool a_t, const std::vector<double>& b, bool b_t, std::vector<double> c) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = a_t ? a[p * m + i] : a[i * k + p];
        const double bv = b_t ? b[j * k + p] : b[p * n + j];
        s += static_cast<long double>(av) * bv;
      }
      c[i * n + j] += static_cast<double>(s);
    }
  return c;
}

}  // namespace

TEST_CASE("scalar reference matches naive loops") {
  Rng rng(1);
  const auto& s = kn::scalar_table();
  for (std::size_t m : {1u, 3u, 7u}) {
    for (std::size_t n : {1u, 5u, 9u}) {
      for (std::size_t k : {1u, 4u, 13u}) {
        auto a = random_vec(m * k, rng), b = random_vec(k * n, rng), c = random_vec(m * n, rng);
        auto c1 = c;
        s.gemm_nn(m, n, k, a.data(), b.data(), c1.data());
        check_close(c1, ref_gemm(m, n, k, a, false, b, false, c));
        auto bt = random_vec(n * k, rng);
        auto c2 = c;
        s.gemm_nt(m, n, k, a.data(), bt.data(), c2.data());
        check_close(c2, ref_gemm(m, n, k, a, false, bt, true, c));
        auto at = random_vec(k * m, rng);
        auto c3 = c;
        s.gemm_tn(m, n, k, at.data(), b.data(), c3.data());
        check_close(c3, ref_gemm(m, n, k, at, true, b, false, c));
      }
    }
  }
}

TEST_CASE("SIMD variants agree with the scalar reference") {
  const auto& s = kn::scalar_table();
  Rng rng(2);
  for (const auto* v : variants()) {
    CAPTURE(v->name);
    for (std::size_t m : {1u, 2u, 5u, 17u}) {
      for (std::size_t n : {1u, 3u, 4u, 8u, 33u}) {
        for (std::size_t k : {1u, 2u, 7u, 64u, 65u}) {
          auto a = random_vec(m * k, rng), b = random_vec(k * n, rng), c = random_vec(m * n, rng);
          auto bt = random_vec(n * k, rng), at = random_vec(k * m, rng);
          auto r1 = c, r2 = c;
          s.gemm_nn(m, n, k, a.data(), b.data(), r1.data());
          v->gemm_nn(m, n, k, a.data(), b.data(), r2.data());
          check_close(r1, r2);
          r1 = c, r2 = c;
          s.gemm_nt(m, n, k, a.data(), bt.data(), r1.data());
          v->gemm_nt(m, n, k, a.data(), bt.data(), r2.data());
          check_close(r1, r2);
          r1 = c, r2 = c;
          s.gemm_tn(m, n, k, at.data(), b.data(), r1.data());
          v->gemm_tn(m, n, k, at.data(), b.data(), r2.data());
          check_close(r1, r2);
        }
      }
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 16u, 31u, 100u}) {
      auto x = random_vec(n, rng), y = random_vec(n, rng);
      auto y1 = y, y2 = y;
      s.axpy(n, 0.7, x.data(), y1.data());
      v->axpy(n, 0.7, x.data(), y2.data());
      check_close(y1, y2);
      y1 = y, y2 = y;
      s.mul(n, x.data(), y.data(), y1.data());
      v->mul(n, x.data(), y.data(), y2.data());
      check_close(y1, y2);
      y1 = y, y2 = y;
      s.mul_acc(n, x.data(), x.data(), y1.data());
      v->mul_acc(n, x.data(), x.data(), y2.data());
      check_close(y1, y2);
      CHECK(std::abs(s.dot(n, x.data(), y.data()) - v->dot(n, x.data(), y.data())) < 1e-12 * (1.0 + n));
    }
  }
}

TEST_CASE("GEMM rows do not depend on the rest of the batch") {
  Rng rng(3);
  std::vector<const kn::KernelTable*> all{&kn::scalar_table()};
  for (const auto* v : variants()) all.push_back(v);
  const std::size_t m = 9, n = 37, k = 21;
  for (const auto* t : all) {
    CAPTURE(t->name);
    auto a = random_vec(m * k, rng), b = random_vec(k * n, rng), bt = random_vec(n * k, rng);
    std::vector<double> full(m * n, 0.0), full_t(m * n, 0.0);
    t->gemm_nn(m, n, k, a.data(), b.data(), full.data());
    t->gemm_nt(m, n, k, a.data(), bt.data(), full_t.data());
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n, 0.0), row_t(n, 0.0);
      t->gemm_nn(1, n, k, a.data() + i * k, b.data(), row.data());
      t->gemm_nt(1, n, k, a.data() + i * k, bt.data(), row_t.data());
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(row[j] == full[i * n + j]);
        CHECK(row_t[j] == full_t[i * n + j]);
      }
    }
  }
}

TEST_CASE("backend selection") {
  const auto backends = kn::available_backends();
  REQUIRE_FALSE(backends.empty());
  CHECK(backends.front() == kn::Backend::Scalar);
  const auto before = kn::active().backend;
  kn::select_backend(kn::Backend::Scalar);
  CHECK(kn::active().backend == kn::Backend::Scalar);
  kn::select_backend(before);
  if (!kn::neon_table()) CHECK_THROWS_AS(kn::select_backend(kn::Backend::Neon), std::invalid_argument);
  CHECK(kn::backend_name(kn::Backend::Avx2) == "avx2");
}
