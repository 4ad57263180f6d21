#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "stagsrl/kernels.hpp"

namespace stagsrl::kernels {

#if defined(STAGSRL_HAVE_AVX2)
const KernelTable* avx2_table_unchecked();
#endif
#if defined(STAGSRL_HAVE_NEON)
const KernelTable* neon_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(STAGSRL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(STAGSRL_HAVE_NEON)
  return neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* best_table() {
  if (const char* env = std::getenv("STAGSRL_SIMD")) {
    std::string_view v(env);
    if (v == "scalar" || v == "off" || v == "0") return &scalar_table();
  }
  if (auto* t = avx2_table()) return t;
  if (auto* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{best_table()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
  if (avx2_table()) out.push_back(Backend::Avx2);
  if (neon_table()) out.push_back(Backend::Neon);
  return out;
}

void select_backend(Backend b) {
  const KernelTable* t = nullptr;
  switch (b) {
    case Backend::Scalar: t = &scalar_table(); break;
    case Backend::Avx2: t = avx2_table(); break;
    case Backend::Neon: t = neon_table(); break;
  }
  if (!t) throw std::invalid_argument("kernel backend " + backend_name(b) + " is unavailable");
  slot().store(t, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "?";
}

}  // namespace stagsrl::kernels
