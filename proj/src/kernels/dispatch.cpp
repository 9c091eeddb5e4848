#include <cstdlib>
#include <string>

#include "emergence/kernels.hpp"
#include "emergence/rational.hpp"

namespace emergence::kernels {

namespace {

const KernelTable* detect_avx2() {
#if defined(EMERGENCE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt"))
    return detail::make_avx2_table();
#endif
  return nullptr;
}

const KernelTable* initial_table() {
  // EMERGENCE_KERNELS=scalar forces the reference path.
  if (const char* env = std::getenv("EMERGENCE_KERNELS"); env && std::string(env) == "scalar")
    return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable* table = detect_avx2();
  return table;
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void select_isa(Isa isa) {
  if (isa == Isa::scalar) {
    slot().store(&scalar_table());
    return;
  }
  const KernelTable* t = avx2_table();
  if (!t) throw InvalidArgument("AVX2 kernels are not available on this machine");
  slot().store(t);
}

}  // namespace emergence::kernels
