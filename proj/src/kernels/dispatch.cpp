#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "flor/kernels/simd.hpp"

namespace flor::kernels {

#ifdef FLOR_HAVE_AVX2_TU
const KernelTable& avx2_kernels_impl();
#endif

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* pick_auto() {
  const KernelTable* t = avx2_kernels();
  return t ? t : &scalar_kernels();
}

const KernelTable* resolve_from_env() {
  const char* env = std::getenv("FLOR_SIMD");
  if (env == nullptr || std::string(env) == "auto") return pick_auto();
  const std::string name(env);
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (t) return t;
    // A forced-but-unavailable env setting falls back rather than aborting
    // every binary on old hardware.
    return &scalar_kernels();
  }
  return pick_auto();
}

}  // namespace

const KernelTable* avx2_kernels() {
#ifdef FLOR_HAVE_AVX2_TU
  if (cpu_has_avx2_fma()) return &avx2_kernels_impl();
#endif
  return nullptr;
}

const KernelTable& active_kernels() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = resolve_from_env();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void select_kernels(const std::string& name) {
  if (name == "auto") {
    g_active.store(pick_auto(), std::memory_order_release);
  } else if (name == "scalar") {
    g_active.store(&scalar_kernels(), std::memory_order_release);
  } else if (name == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (!t) throw std::runtime_error("avx2 kernels unavailable on this CPU");
    g_active.store(t, std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel variant: " + name);
  }
}

}  // namespace flor::kernels
