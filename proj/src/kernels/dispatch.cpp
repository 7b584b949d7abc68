#include <atomic>
#include <cstdlib>
#include <string>

#include "fockshift/kernels.hpp"

namespace fockshift::kernels {

#if defined(FOCKSHIFT_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(FOCKSHIFT_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

const KernelTable* avx2_table() {
#if defined(FOCKSHIFT_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(FOCKSHIFT_HAVE_NEON)
  return &neon_kernels();  // Advanced SIMD is mandatory on aarch64.
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* lookup(std::string_view name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") return avx2_table();
  if (name == "neon") return neon_table();
  return nullptr;
}

const KernelTable* initial_choice() {
  if (const char* forced = std::getenv("FOCKSHIFT_KERNELS"); forced != nullptr && *forced != '\0') {
    if (const KernelTable* t = lookup(forced)) return t;
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(std::string_view name) {
  const KernelTable* t = lookup(name);
  if (t == nullptr) {
    throw DomainError("kernel variant '" + std::string(name) + "' is not available on this host");
  }
  current().store(t, std::memory_order_release);
}

std::vector<std::string_view> available() {
  std::vector<std::string_view> names{"scalar"};
  if (avx2_table() != nullptr) names.emplace_back("avx2");
  if (neon_table() != nullptr) names.emplace_back("neon");
  return names;
}

}  // namespace fockshift::kernels
