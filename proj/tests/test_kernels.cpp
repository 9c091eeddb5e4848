#include <doctest.h>

#include <random>
#include <vector>

#include "emergence/kernels.hpp"

using namespace emergence::kernels;

namespace {

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t len, int alphabet) {
  std::vector<std::uint8_t> out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() % static_cast<unsigned>(alphabet));
  return out;
}

std::vector<std::uint64_t> random_bits(std::mt19937_64& rng, std::size_t words) {
  std::vector<std::uint64_t> out(words);
  for (auto& w : out) w = rng();
  return out;
}

}  // namespace

TEST_CASE("scalar first_mismatch matches a plain loop") {
  std::mt19937_64 rng(1);
  const auto& s = scalar_table();
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t len = rng() % 200;
    auto a = random_bytes(rng, len, 3);
    auto b = a;
    if (len && rng() % 4) b[rng() % len] ^= 1;
    std::size_t expected = 0;
    while (expected < len && a[expected] == b[expected]) ++expected;
    CHECK(s.first_mismatch(a.data(), b.data(), len) == expected);
  }
}

TEST_CASE("scalar popcounts match std::popcount") {
  std::mt19937_64 rng(2);
  const auto& s = scalar_table();
  for (std::size_t words = 0; words < 20; ++words) {
    auto a = random_bits(rng, words), b = random_bits(rng, words);
    std::uint64_t pc = 0, px = 0, pa = 0, pn = 0;
    for (std::size_t i = 0; i < words; ++i) {
      pc += static_cast<std::uint64_t>(std::popcount(a[i]));
      px += static_cast<std::uint64_t>(std::popcount(a[i] ^ b[i]));
      pa += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
      pn += static_cast<std::uint64_t>(std::popcount(a[i] & ~b[i]));
    }
    CHECK(s.popcount(a.data(), words) == pc);
    CHECK(s.popcount_xor(a.data(), b.data(), words) == px);
    CHECK(s.popcount_and(a.data(), b.data(), words) == pa);
    CHECK(s.popcount_andnot(a.data(), b.data(), words) == pn);
  }
}

TEST_CASE("avx2 kernels agree with scalar on random inputs") {
  const KernelTable* vec = avx2_table();
  if (!vec) {
    MESSAGE("AVX2 unavailable on this host; equivalence not exercised");
    return;
  }
  const auto& s = scalar_table();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t len = rng() % 300;
    auto a = random_bytes(rng, len, 1 + static_cast<int>(rng() % 4));
    auto b = a;
    const int flips = static_cast<int>(rng() % 3);
    for (int f = 0; f < flips && len; ++f) b[rng() % len] ^= 1;
    REQUIRE(vec->first_mismatch(a.data(), b.data(), len) == s.first_mismatch(a.data(), b.data(), len));
  }
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t len = 1 + rng() % 70, count = rng() % 40;
    auto probe = random_bytes(rng, len, 2);
    std::vector<std::uint8_t> block;
    for (std::size_t w = 0; w < count; ++w) {
      auto row = rng() % 2 ? probe : random_bytes(rng, len, 2);
      if (len && rng() % 2) row[rng() % len] ^= 1;
      block.insert(block.end(), row.begin(), row.end());
    }
    std::vector<std::uint32_t> out_s(count), out_v(count);
    s.first_mismatch_many(probe.data(), block.data(), count, len, out_s.data());
    vec->first_mismatch_many(probe.data(), block.data(), count, len, out_v.data());
    REQUIRE(out_s == out_v);
  }
  for (std::size_t words = 0; words < 70; ++words) {
    auto a = random_bits(rng, words), b = random_bits(rng, words);
    CHECK(vec->popcount(a.data(), words) == s.popcount(a.data(), words));
    CHECK(vec->popcount_xor(a.data(), b.data(), words) == s.popcount_xor(a.data(), b.data(), words));
    CHECK(vec->popcount_and(a.data(), b.data(), words) == s.popcount_and(a.data(), b.data(), words));
    CHECK(vec->popcount_andnot(a.data(), b.data(), words) == s.popcount_andnot(a.data(), b.data(), words));
  }
}

TEST_CASE("dispatch can be pinned to scalar") {
  const Isa before = active_isa();
  select_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(active().isa == Isa::scalar);
  if (avx2_table()) select_isa(before);
}
