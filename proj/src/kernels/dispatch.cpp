#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace nsaos::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, "scalar", &scalar::window_gains,
                                   &scalar::ucb_scores, &scalar::affine, &scalar::row_blend};

#if defined(NSAOS_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, "avx2", &avx2::window_gains, &avx2::ucb_scores,
                                 &avx2::affine, &avx2::row_blend};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable* initial_table() {
  const KernelTable* best = &kScalarTable;
  if (const KernelTable* t = table_for(Isa::kAvx2)) best = t;
  if (const char* env = std::getenv("NONSTAT_AOS_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return &kScalarTable;
    if (want == "avx2" && table_for(Isa::kAvx2)) return table_for(Isa::kAvx2);
  }
  return best;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#if defined(NSAOS_HAVE_AVX2)
      return cpu_has_avx2() ? &kAvx2Table : nullptr;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

bool select(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  active_slot().store(t, std::memory_order_relaxed);
  return true;
}

}  // namespace nsaos::kernels
