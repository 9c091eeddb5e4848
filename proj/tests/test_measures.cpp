#include <doctest.h>

#include "oracles.hpp"

#include "emergence/measures.hpp"

using namespace emergence;

namespace {

SystemHandle full2() { return make_handle(SymbolicSystem::full_shift(2)); }

DiscreteMeasure mix(const SystemHandle& s, std::initializer_list<std::pair<const char*, Rational>> atoms) {
  std::vector<Atom> out;
  for (const auto& [w, p] : atoms) out.push_back({word_from_string(w), p});
  return DiscreteMeasure(s, out);
}

std::string str(const DiscreteMeasure& mu) {
  std::string s;
  for (const auto& a : mu.atoms()) s += word_to_string(a.word) + ":" + to_string(a.weight) + " ";
  return s;
}

}  // namespace

TEST_CASE("measure construction normalizes atoms") {
  auto s = full2();
  auto mu = mix(s, {{"01", Rational(1, 4)}, {"00", Rational(1, 2)}, {"01", Rational(1, 4)}, {"11", 0}});
  CHECK(str(mu) == "00:1/2 01:1/2 ");
  CHECK_THROWS_AS(mix(s, {{"0", Rational(1, 2)}}), InvalidArgument);
  CHECK_THROWS_AS(mix(s, {{"0", Rational(3, 2)}, {"1", Rational(-1, 2)}}), InvalidArgument);
}

TEST_CASE("Wasserstein examples") {
  auto s = full2();
  auto x = DiscreteMeasure::dirac(s, word_from_string("0010"));
  auto y = DiscreteMeasure::dirac(s, word_from_string("0110"));
  CHECK(wasserstein(x, x, 1).power_cost == 0);
  CHECK(wasserstein(x, y, 1).power_cost == Rational(1, 2));
  auto half = mix(s, {{"0010", Rational(1, 2)}, {"0110", Rational(1, 2)}});
  CHECK(wasserstein(half, x, 1).power_cost == Rational(1, 4));
  CHECK(wasserstein(half, x, 1).exact_value() == Rational(1, 4));
}

TEST_CASE("W_p^p matches vertex enumeration under d and d_n") {
  std::mt19937_64 rng(31);
  for (auto s : {full2(), make_handle(SymbolicSystem::full_shift(3, Rational(2, 5)))}) {
    for (int trial = 0; trial < 150; ++trial) {
      const int len = 2 + static_cast<int>(rng() % 4);
      auto mu = random_measure(s, rng, 4, len), nu = random_measure(s, rng, 4, len);
      const int p = 1 + static_cast<int>(rng() % 3), n = static_cast<int>(rng() % (len + 1));
      std::optional<BowenContext> ctx;
      if (n > 0) ctx = BowenContext{n};
      auto lib = wasserstein(mu, nu, p, ctx);
      CHECK(lib.exact);
      CHECK(lib.power_cost == oracle::wasserstein_power(mu, nu, p, n));
    }
  }
}

TEST_CASE("W_1 equals the ultrametric tree formula") {
  std::mt19937_64 rng(32);
  auto s = full2();
  for (int trial = 0; trial < 200; ++trial) {
    const int len = 2 + static_cast<int>(rng() % 5);
    auto mu = random_measure(s, rng, 5, len), nu = random_measure(s, rng, 5, len);
    const int n = 1 + static_cast<int>(rng() % len);
    CHECK(wasserstein(mu, nu, 1, BowenContext{n}).power_cost == ultrametric_w1(mu, nu, n));
  }
}

TEST_CASE("Wasserstein metric axioms") {
  std::mt19937_64 rng(33);
  auto s = full2();
  for (int trial = 0; trial < 150; ++trial) {
    auto a = random_measure(s, rng, 4, 5), b = random_measure(s, rng, 4, 5), c = random_measure(s, rng, 4, 5);
    auto ab = wasserstein(a, b, 1).power_cost, bc = wasserstein(b, c, 1).power_cost, ac = wasserstein(a, c, 1).power_cost;
    CHECK(ab == wasserstein(b, a, 1).power_cost);
    CHECK(ac <= ab + bc);
    CHECK((ab == 0) == (a == b));
  }
}

TEST_CASE("inexact ground distances are rejected unless allowed") {
  auto s = full2();
  auto a = DiscreteMeasure::dirac(s, word_from_string("01"));
  auto b = DiscreteMeasure::dirac(s, word_from_string("011"));
  CHECK_THROWS_AS(wasserstein(a, b, 1), InexactDistance);
  auto lenient = wasserstein(a, b, 1, std::nullopt, TransportOptions{true});
  CHECK_FALSE(lenient.exact);
  CHECK(lenient.power_cost == 0);
  CHECK_THROWS_AS(wasserstein(a, a, 4), InvalidArgument);
}

TEST_CASE("Levy-Prokhorov examples") {
  auto s = full2();
  auto x = DiscreteMeasure::dirac(s, word_from_string("000"));
  auto y = DiscreteMeasure::dirac(s, word_from_string("010"));
  CHECK(levy_prokhorov(x, x) == 0);
  CHECK(levy_prokhorov(x, y) == Rational(1, 2));
  CHECK(levy_prokhorov(x, DiscreteMeasure::dirac(s, word_from_string("100"))) == 1);
}

TEST_CASE("Levy-Prokhorov matches the Borel-set definition") {
  std::mt19937_64 rng(34);
  for (auto s : {full2(), make_handle(SymbolicSystem::full_shift(3, Rational(1, 3)))}) {
    for (int trial = 0; trial < 200; ++trial) {
      const int len = 2 + static_cast<int>(rng() % 4);
      auto mu = random_measure(s, rng, 3, len), nu = random_measure(s, rng, 3, len);
      const int n = static_cast<int>(rng() % 3);
      std::optional<BowenContext> ctx;
      if (n > 0) ctx = BowenContext{n};
      CHECK_MESSAGE(levy_prokhorov(mu, nu, ctx) == oracle::levy_prokhorov(mu, nu, n), str(mu), " vs ", str(nu), " n=", n);
    }
  }
}

TEST_CASE("Hoelder comparisons between W_p and LP") {
  std::mt19937_64 rng(35);
  auto s = full2();
  const Rational diam = s->diameter();
  for (int trial = 0; trial < 200; ++trial) {
    auto mu = random_measure(s, rng, 4, 4), nu = random_measure(s, rng, 4, 4);
    const Rational lp = oracle::levy_prokhorov(mu, nu, 0);
    for (unsigned p = 1; p <= 3; ++p) {
      const Rational wp = oracle::wasserstein_power(mu, nu, static_cast<int>(p), 0);
      CHECK(pow(lp, p + 1) <= wp);
      CHECK(wp <= (1 + pow(diam, p)) * lp);
      for (unsigned q = 1; q <= p; ++q) {
        const Rational wq = oracle::wasserstein_power(mu, nu, static_cast<int>(q), 0);
        CHECK(pow(wq, p) <= pow(wp, q));
        CHECK(wp <= pow(diam, p - q) * wq);
      }
    }
  }
}

TEST_CASE("orbit metrics are dominated by the lifted Bowen metrics") {
  std::mt19937_64 rng(36);
  auto s = full2();
  for (int trial = 0; trial < 150; ++trial) {
    const int len = 3 + static_cast<int>(rng() % 3);
    auto mu = random_measure(s, rng, 4, len), nu = random_measure(s, rng, 4, len);
    const int n = 1 + static_cast<int>(rng() % len);
    for (int p = 1; p <= 3; ++p) {
      // Literal maximum over pushforwards, each solved by the vertex oracle.
      Rational orbit = 0;
      auto a = mu, b = nu;
      for (int i = 0; i < n; ++i) {
        orbit = std::max(orbit, oracle::wasserstein_power(a, b, p, 0));
        if (i + 1 < n) {
          a = pushforward(a);
          b = pushforward(b);
        }
      }
      CHECK(bowen_orbit_wasserstein_power(mu, nu, p, n) == orbit);
      CHECK(orbit <= oracle::wasserstein_power(mu, nu, p, n));
    }
    CHECK(bowen_orbit_levy_prokhorov(mu, nu, n) <= oracle::levy_prokhorov(mu, nu, n));
  }
  auto mu = random_measure(s, rng, 3, 4), nu = random_measure(s, rng, 3, 4);
  CHECK(bowen_orbit_wasserstein_power(mu, nu, 2, 1) == wasserstein(mu, nu, 2).power_cost);
}

TEST_CASE("pushforward") {
  auto s = full2();
  CHECK(str(pushforward(DiscreteMeasure::dirac(s, word_from_string("0110")))) == "110:1 ");
  CHECK(str(pushforward(mix(s, {{"01", Rational(1, 2)}, {"11", Rational(1, 2)}}))) == "1:1 ");
  std::mt19937_64 rng(37);
  for (int i = 0; i < 50; ++i) {
    Rational total = 0;
    const auto image = pushforward(random_measure(s, rng, 5, 5));
    for (const auto& a : image.atoms()) total += a.weight;
    CHECK(total == 1);
  }
}

TEST_CASE("empirical and periodic orbit measures") {
  auto s = full2();
  CylinderPoint x(s, "010101");
  CHECK(str(empirical_measure(x, 1)) == "010101:1 ");
  CHECK(str(empirical_measure(x, 2)) == "01010:1/2 10101:1/2 ");
  CHECK(str(periodic_orbit_measure(s, word_from_string("0"), 4)) == "0000:1 ");
  auto orbit = periodic_orbit_measure(s, word_from_string("01"), 4);
  CHECK(str(orbit) == "0101:1/2 1010:1/2 ");
  auto cyc = word_from_string("0111");
  CHECK(pushforward(periodic_orbit_measure(s, cyc, 6)) == periodic_orbit_measure(s, rotate(cyc, 1), 5));
  CHECK_THROWS_AS(periodic_orbit_measure(make_handle(SymbolicSystem::subshift({{true, true}, {true, false}})),
                                         word_from_string("1"), 3),
                  InvalidArgument);
}
