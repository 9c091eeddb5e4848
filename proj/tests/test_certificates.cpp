#include <doctest.h>

#include "oracles.hpp"

#include "emergence/counting.hpp"
#include "emergence/io.hpp"

using namespace emergence;

namespace {

SystemHandle full2() { return make_handle(SymbolicSystem::full_shift(2)); }
SystemHandle golden() { return make_handle(SymbolicSystem::subshift({{true, true}, {true, false}})); }

// Minimum support distance under d_n via the literal Bowen oracle.
Rational support_gap(const DiscreteMeasure& a, const DiscreteMeasure& b, int n) {
  std::optional<Rational> best;
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) {
      Rational d = oracle::bowen_distance(*a.system(), x.word, y.word, n);
      if (!best || d < *best) best = d;
    }
  return *best;
}

}  // namespace

TEST_CASE("Dirac apart family") {
  auto cert = apart_measure_family(full2(), 3, Rational(3, 10));
  CHECK(cert.family_size == 16);
  for (std::size_t i = 0; i < cert.measures.size(); ++i)
    for (std::size_t j = i + 1; j < cert.measures.size(); ++j)
      CHECK(support_gap(cert.measures[i], cert.measures[j], cert.n) >= cert.eps);
  CHECK(verify_certificate(cert).passed);
  CHECK(recount_certificate(cert, 1).passed);
}

TEST_CASE("periodic apart family collapses rotations") {
  auto cert = apart_measure_family(full2(), 3, Rational(3, 10), ApartSource::periodic);
  CHECK(cert.family_size >= 4);
  for (std::size_t i = 0; i < cert.measures.size(); ++i) {
    CHECK(cert.measures[i].size() >= 1);
    for (std::size_t j = i + 1; j < cert.measures.size(); ++j)
      CHECK(support_gap(cert.measures[i], cert.measures[j], cert.n) >= cert.eps);
  }
  CHECK(verify_certificate(cert).passed);
  CHECK(recount_certificate(cert, 1).passed);

  auto sft = apart_measure_family(golden(), 3, Rational(3, 10), ApartSource::periodic);
  CHECK(sft.family_size >= 2);
  CHECK(sft.n > 3);
  CHECK(verify_certificate(sft).passed);
}

TEST_CASE("constant fixed points are apart at every horizon") {
  auto s = full2();
  for (int n = 1; n <= 6; ++n) {
    auto a = periodic_orbit_measure(s, word_from_string("0"), n + 2);
    auto b = periodic_orbit_measure(s, word_from_string("1"), n + 2);
    CHECK(support_gap(a, b, n) == 1);
    CHECK(apart_count({a, b}, n, Rational(1)).count == 2);
  }
}

TEST_CASE("Hamming family at N = 8 is separated by a quarter of the base scale") {
  auto base = apart_measure_family(full2(), 3, Rational(3, 10));
  SampleOptions all{1000, 0, 0};
  auto cert = hamming_measure_family(base, 8, all);
  CHECK(cert.family_size == HalfWeightCode::shared(8).size());
  CHECK(cert.eps == base.eps / 4);
  CHECK(cert.verification.passed);
  const std::size_t k = cert.measures.size();
  REQUIRE(k == 14);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const Rational w = oracle::wasserstein_power(cert.measures[i], cert.measures[j], 1, cert.n);
      CHECK(w > cert.eps);
      CHECK(w >= base.eps / 4);
    }
  CHECK(verify_certificate(cert).passed);
  CHECK(recount_certificate(cert, 1).passed);
}

TEST_CASE("Hamming family at N = 128 with sampled pairs") {
  auto base = apart_measure_family(full2(), 6, Rational(1, 2));
  CHECK(base.family_size == 128);
  auto cert = hamming_measure_family(base, 128, {16, 40, 5});
  CHECK(cert.family_size >= BigInt(1) << 16);
  CHECK(cert.verification.sampled);
  CHECK(cert.verification.passed);
  for (const auto& pair : cert.verification.pairs) {
    auto a = coded_measure(cert, pair.first), b = coded_measure(cert, pair.second);
    CHECK(wasserstein(a, b, 1, BowenContext{cert.n}).power_cost == pair.distance);
    CHECK(pair.distance > cert.eps);
  }
  CHECK(recount_certificate(cert, 1).passed);
}

TEST_CASE("hyperspace families") {
  auto s = full2();
  auto sep = hyperspace_family(s, 3, Rational(3, 10), 16, SetDirection::separated, {1000, 0, 0});
  CHECK(sep.family_size == 72);
  for (std::size_t i = 0; i < sep.sets.size(); ++i)
    for (std::size_t j = i + 1; j < sep.sets.size(); ++j)
      CHECK(oracle::hausdorff(sep.sets[i], sep.sets[j], 3) > Rational(3, 10));
  CHECK(verify_certificate(sep).passed);
  CHECK(recount_certificate(sep, 1).passed);

  auto split = hyperspace_family(s, 5, Rational(1, 2), 8, SetDirection::split, {1000, 0, 0});
  CHECK(split.base_sets.size() == 8);
  CHECK(split.verification.passed);
  for (const auto& b : split.sets) CHECK(is_fixed(b));
  CHECK(verify_certificate(split).passed);

  auto base = split_base_family(s, 2, Rational(1, 2));
  for (const auto& b : base.sets) CHECK(is_fixed(b));
  CHECK(split_count(base.sets, base.n, base.eps).count == base.sets.size());
  CHECK(is_fixed(set_union(base.sets[0], base.sets[1])));
}

TEST_CASE("disjoint singletons: Hausdorff equals the point distance") {
  auto s = full2();
  FiniteClosedSet a(s, {word_from_string("0010")}), b(s, {word_from_string("0111")});
  CHECK(hausdorff(a, b, BowenContext{2}) == oracle::bowen_distance(*s, a.points()[0], b.points()[0], 2));
}

TEST_CASE("tampering is detected") {
  auto base = apart_measure_family(full2(), 3, Rational(3, 10));
  auto cert = hamming_measure_family(base, 8, {1000, 0, 0});

  auto bad_member = cert;
  auto atoms = bad_member.measures[0].atoms();
  atoms[0].weight += Rational(1, 1000);
  atoms[1].weight -= Rational(1, 1000);
  bad_member.measures[0] = DiscreteMeasure(bad_member.system, atoms);
  CHECK_FALSE(verify_certificate(bad_member).passed);

  auto bad_distance = cert;
  bad_distance.verification.pairs.at(0).distance += Rational(1, 1000);
  CHECK_FALSE(verify_certificate(bad_distance).passed);

  auto bad_eps = cert;
  bad_eps.eps = 1;
  CHECK_FALSE(verify_certificate(bad_eps).passed);

  auto bad_base = base;
  bad_base.measures[1] = bad_base.measures[0];
  CHECK_FALSE(verify_certificate(bad_base).passed);
  CHECK_FALSE(recount_certificate(bad_base, 1).passed);
}

TEST_CASE("certificate JSON round trip") {
  auto base = apart_measure_family(full2(), 3, Rational(3, 10));
  auto cert = hamming_measure_family(base, 16, {8, 20, 3});
  auto doc = io::to_json(cert);
  auto loaded = io::certificate_from_json(doc);
  CHECK(loaded.defects.empty());
  CHECK(io::to_json(loaded.cert) == doc);
  CHECK(verify_certificate(loaded.cert).passed);
}

TEST_CASE("code length selection") {
  CHECK(code_length_for(20) == 16);
  CHECK(code_length_for(1000, 512) == 512);
  CHECK(best_code_length(7) == 0);
  CHECK(best_code_length(40) == 24);
  CHECK(best_code_length(64) == 64);
  CHECK(best_code_length(128, 64) == 64);
}
