#include <atomic>
#include <cstdlib>
#include <string_view>

#include "blockspec/kernels.hpp"

namespace blockspec::kernels {

#if defined(BLOCKSPEC_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(BLOCKSPEC_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

const KernelTable* from_name(std::string_view name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") return avx2_table();
  if (name == "auto" || name.empty()) return best_available();
  return nullptr;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{[] {
    const char* env = std::getenv("BLOCKSPEC_KERNELS");
    const KernelTable* t = env ? from_name(env) : nullptr;
    return t ? t : best_available();
  }()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
  const KernelTable* t = from_name(name);
  if (!t) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

}  // namespace blockspec::kernels
