#include <doctest.h>

#include "oracles.hpp"

#include "emergence/hyperspace.hpp"

using namespace emergence;

namespace {

SystemHandle full2() { return make_handle(SymbolicSystem::full_shift(2)); }

FiniteClosedSet set_of(const SystemHandle& s, std::initializer_list<const char*> words) {
  std::vector<Word> out;
  for (const char* w : words) out.push_back(word_from_string(w));
  return FiniteClosedSet(s, out);
}

FiniteClosedSet random_set(const SystemHandle& s, std::mt19937_64& rng, int len, int max_size) {
  std::vector<Word> words;
  const int size = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_size));
  for (int i = 0; i < size; ++i) words.push_back(random_word(*s, len, rng));
  return FiniteClosedSet(s, words);
}

}  // namespace

TEST_CASE("Hausdorff examples") {
  auto s = full2();
  auto b = set_of(s, {"00"}), c = set_of(s, {"01"});
  CHECK(hausdorff(b, b) == 0);
  CHECK(hausdorff(b, c) == Rational(1, 2));
  CHECK(hausdorff(b, c, BowenContext{2}) == 1);
  auto x = set_of(s, {"0010"}), xy = set_of(s, {"0010", "0110"});
  CHECK(hausdorff(x, xy) == Rational(1, 2));
}

TEST_CASE("Hausdorff matches max-min under d and d_n") {
  std::mt19937_64 rng(41);
  for (auto s : {full2(), make_handle(SymbolicSystem::subshift({{true, true}, {true, false}}, Rational(2, 3)))}) {
    for (int trial = 0; trial < 400; ++trial) {
      const int len = 1 + static_cast<int>(rng() % 7);
      auto b = random_set(s, rng, len, 6), c = random_set(s, rng, len, 6);
      const int n = static_cast<int>(rng() % (len + 1));
      std::optional<BowenContext> ctx;
      if (n > 0) ctx = BowenContext{n};
      CHECK(hausdorff(b, c, ctx) == oracle::hausdorff(b, c, n));
      if (n > 0) CHECK(hausdorff_power(b, c, n).value(*s) == oracle::hausdorff(b, c, n));
    }
  }
}

TEST_CASE("orbit Hausdorff sandwich") {
  std::mt19937_64 rng(42);
  auto s = full2();
  for (int trial = 0; trial < 300; ++trial) {
    const int len = 2 + static_cast<int>(rng() % 5);
    auto b = random_set(s, rng, len, 4), c = random_set(s, rng, len, 4);
    const int n = 1 + static_cast<int>(rng() % len);
    const Rational orbit = bowen_orbit_hausdorff(b, c, n);
    const Rational lifted = oracle::hausdorff(b, c, n);
    const Rational spread = std::max(set_diameter(b, BowenContext{n}), set_diameter(c, BowenContext{n}));
    CHECK(orbit <= lifted);
    CHECK(lifted <= orbit + spread);
    if (b.size() == 1 && c.size() == 1) CHECK(orbit == lifted);
  }
  auto b = random_set(s, rng, 5, 3), c = random_set(s, rng, 5, 3);
  CHECK(bowen_orbit_hausdorff(b, c, 1) == hausdorff(b, c));
}

TEST_CASE("image sets") {
  auto s = full2();
  CHECK(image_set(set_of(s, {"01", "11"})) == set_of(s, {"1"}));
  CHECK(image_set(set_of(s, {"0110"})) == set_of(s, {"110"}));
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    auto b = random_set(s, rng, 5, 6);
    CHECK(image_set(b).size() <= b.size());
  }
}

TEST_CASE("periodic fixed sets") {
  auto s = full2();
  auto fixed = periodic_fixed_set(s, {word_from_string("0")}, 5);
  CHECK(fixed == set_of(s, {"00000"}));
  CHECK(is_fixed(fixed));
  auto two = periodic_fixed_set(s, {word_from_string("01")}, 4);
  CHECK(two == set_of(s, {"0101", "1010"}));
  CHECK(is_fixed(two));
  auto both = set_union(fixed, periodic_fixed_set(s, {word_from_string("1")}, 5));
  CHECK(is_fixed(both));
  for (const char* cycle : {"011", "0111", "00101", "010011"})
    CHECK(is_fixed(periodic_fixed_set(s, {word_from_string(cycle)}, 9)));
  CHECK_FALSE(is_fixed(set_of(s, {"01"})));
}

TEST_CASE("set validation") {
  auto s = full2();
  CHECK_THROWS_AS(FiniteClosedSet(s, {}), InvalidArgument);
  CHECK_THROWS_AS(set_of(s, {"01", "011"}), InvalidArgument);
  CHECK_THROWS_AS(hausdorff(set_of(s, {"01"}), set_of(s, {"011"})), InexactDistance);
}
