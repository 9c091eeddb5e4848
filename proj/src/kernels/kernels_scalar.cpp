#include "emergence/kernels.hpp"

#include <bit>
#include <cstring>

namespace emergence::kernels {

namespace {

std::size_t first_mismatch_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t len) {
  std::size_t i = 0;
  // Word-at-a-time compare; the first differing byte is the lowest set byte of the XOR.
  for (; i + 8 <= len; i += 8) {
    std::uint64_t x, y;
    std::memcpy(&x, a + i, 8);
    std::memcpy(&y, b + i, 8);
    if (std::uint64_t diff = x ^ y; diff != 0) {
      if constexpr (std::endian::native == std::endian::little)
        return i + static_cast<std::size_t>(std::countr_zero(diff)) / 8;
      else
        return i + static_cast<std::size_t>(std::countl_zero(diff)) / 8;
    }
  }
  for (; i < len; ++i)
    if (a[i] != b[i]) return i;
  return len;
}

void first_mismatch_many_scalar(const std::uint8_t* probe, const std::uint8_t* block,
                                std::size_t count, std::size_t len, std::uint32_t* out) {
  for (std::size_t w = 0; w < count; ++w)
    out[w] = static_cast<std::uint32_t>(first_mismatch_scalar(probe, block + w * len, len));
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i]));
  return total;
}

std::uint64_t popcount_xor_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i)
    total += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
  return total;
}

std::uint64_t popcount_and_scalar(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i)
    total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

std::uint64_t popcount_andnot_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                     std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i)
    total += static_cast<std::uint64_t>(std::popcount(a[i] & ~b[i]));
  return total;
}

const KernelTable kScalar{
    Isa::scalar,         first_mismatch_scalar, first_mismatch_many_scalar,  popcount_scalar,
    popcount_xor_scalar, popcount_and_scalar,   popcount_andnot_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace emergence::kernels
