#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64,
// an AVX2 variant chosen at runtime from CPUID. The two must agree bit for bit;
// tests/test_kernels.cpp checks that on randomized inputs.

#include <atomic>
#include <cstddef>
#include <cstdint>

namespace emergence::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // Index of the first i < len with a[i] != b[i], or len when the ranges agree.
  std::size_t (*first_mismatch)(const std::uint8_t* a, const std::uint8_t* b, std::size_t len);
  // out[w] = first_mismatch(probe, block + w * len, len) for w < count.
  void (*first_mismatch_many)(const std::uint8_t* probe, const std::uint8_t* block,
                              std::size_t count, std::size_t len, std::uint32_t* out);
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t words);
  std::uint64_t (*popcount_xor)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  std::uint64_t (*popcount_and)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // |a & ~b|
  std::uint64_t (*popcount_andnot)(const std::uint64_t* a, const std::uint64_t* b,
                                   std::size_t words);
};

const KernelTable& scalar_table();
// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();

const KernelTable& active();
Isa active_isa();
// Pins the dispatch target (tests, benchmarking). Throws if unsupported.
void select_isa(Isa isa);

inline std::size_t first_mismatch(const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
  return active().first_mismatch(a, b, len);
}
inline void first_mismatch_many(const std::uint8_t* probe, const std::uint8_t* block,
                                std::size_t count, std::size_t len, std::uint32_t* out) {
  active().first_mismatch_many(probe, block, count, len, out);
}
inline std::uint64_t popcount(const std::uint64_t* a, std::size_t words) {
  return active().popcount(a, words);
}
inline std::uint64_t popcount_xor(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return active().popcount_xor(a, b, words);
}
inline std::uint64_t popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return active().popcount_and(a, b, words);
}
inline std::uint64_t popcount_andnot(const std::uint64_t* a, const std::uint64_t* b,
                                     std::size_t words) {
  return active().popcount_andnot(a, b, words);
}

namespace detail {
const KernelTable* make_avx2_table();
}

}  // namespace emergence::kernels
