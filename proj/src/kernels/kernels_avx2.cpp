// Compiled with -mavx2 -mpopcnt; only reached after a CPUID check in dispatch.cpp.

#include <immintrin.h>

#include <bit>
#include <cstring>

#include "emergence/kernels.hpp"

namespace emergence::kernels {

namespace {

inline std::size_t mismatch_tail(const std::uint8_t* a, const std::uint8_t* b, std::size_t i,
                                 std::size_t len) {
  for (; i + 8 <= len; i += 8) {
    std::uint64_t x, y;
    std::memcpy(&x, a + i, 8);
    std::memcpy(&y, b + i, 8);
    if (std::uint64_t diff = x ^ y; diff != 0)
      return i + static_cast<std::size_t>(std::countr_zero(diff)) / 8;
  }
  for (; i < len; ++i)
    if (a[i] != b[i]) return i;
  return len;
}

std::size_t first_mismatch_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
  std::size_t i = 0;
  for (; i + 32 <= len; i += 32) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    auto eq = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    if (eq != 0xFFFFFFFFu) return i + static_cast<std::size_t>(std::countr_zero(~eq));
  }
  if (i + 16 <= len) {
    __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i));
    __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i));
    auto eq = static_cast<std::uint32_t>(_mm_movemask_epi8(_mm_cmpeq_epi8(va, vb)));
    if (eq != 0xFFFFu) return i + static_cast<std::size_t>(std::countr_zero(~eq & 0xFFFFu));
    i += 16;
  }
  return mismatch_tail(a, b, i, len);
}

void first_mismatch_many_avx2(const std::uint8_t* probe, const std::uint8_t* block,
                              std::size_t count, std::size_t len, std::uint32_t* out) {
  if (len == 0) {
    for (std::size_t w = 0; w < count; ++w) out[w] = 0;
    return;
  }
  if (len <= 16) {
    // Short words: broadcast the probe once, compare 16-byte windows.
    alignas(16) std::uint8_t padded_probe[16] = {};
    std::memcpy(padded_probe, probe, len);
    const __m128i vp = _mm_load_si128(reinterpret_cast<const __m128i*>(padded_probe));
    const std::uint32_t live = (len == 16) ? 0xFFFFu : ((1u << len) - 1u);
    std::size_t w = 0;
    // Whole 16-byte loads stay inside the block while (w * len + 16) <= count * len.
    for (; w < count && (w * len + 16) <= count * len; ++w) {
      __m128i vw = _mm_loadu_si128(reinterpret_cast<const __m128i*>(block + w * len));
      auto eq = static_cast<std::uint32_t>(_mm_movemask_epi8(_mm_cmpeq_epi8(vp, vw)));
      std::uint32_t diff = ~eq & live;
      out[w] = diff ? static_cast<std::uint32_t>(std::countr_zero(diff))
                    : static_cast<std::uint32_t>(len);
    }
    for (; w < count; ++w)
      out[w] = static_cast<std::uint32_t>(mismatch_tail(probe, block + w * len, 0, len));
    return;
  }
  for (std::size_t w = 0; w < count; ++w)
    out[w] = static_cast<std::uint32_t>(first_mismatch_avx2(probe, block + w * len, len));
}

// Nibble-table popcount (Mula et al.), horizontal sums via SAD against zero.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1,
                                          2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, low_mask);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline std::uint64_t horizontal_sum(__m256i acc) {
  return static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 0)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 1)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 2)) +
         static_cast<std::uint64_t>(_mm256_extract_epi64(acc, 3));
}

template <class Combine, class ScalarCombine>
std::uint64_t popcount_binary(const std::uint64_t* a, const std::uint64_t* b, std::size_t words,
                              Combine combine, ScalarCombine scalar) {
  std::size_t i = 0;
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  for (; i + 4 <= words; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(popcount_bytes(combine(va, vb)), zero));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(scalar(a[i], b[i])));
  return total;
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t words) {
  return popcount_binary(
      a, a, words, [](__m256i x, __m256i) { return x; },
      [](std::uint64_t x, std::uint64_t) { return x; });
}

std::uint64_t popcount_xor_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return popcount_binary(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_xor_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x ^ y; });
}

std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return popcount_binary(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_and_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

std::uint64_t popcount_andnot_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                   std::size_t words) {
  // _mm256_andnot_si256(y, x) computes ~y & x.
  return popcount_binary(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_andnot_si256(y, x); },
      [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

const KernelTable kAvx2{
    Isa::avx2,         first_mismatch_avx2, first_mismatch_many_avx2, popcount_avx2,
    popcount_xor_avx2, popcount_and_avx2,   popcount_andnot_avx2,
};

}  // namespace

namespace detail {
const KernelTable* make_avx2_table() { return &kAvx2; }
}  // namespace detail

}  // namespace emergence::kernels
