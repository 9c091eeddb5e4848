#include <doctest.h>

#include "oracles.hpp"

#include "emergence/quantization.hpp"

using namespace emergence;

namespace {

SystemHandle full2() { return make_handle(SymbolicSystem::full_shift(2)); }

DiscreteMeasure orbit(const SystemHandle& s, const char* cycle, int resolution) {
  return periodic_orbit_measure(s, word_from_string(cycle), resolution);
}

DiscreteMeasure random_orbit(const SystemHandle& s, std::mt19937_64& rng, int resolution) {
  const int period = 1 + static_cast<int>(rng() % 5);
  return periodic_orbit_measure(s, random_word(*s, period, rng), resolution);
}

// Minimum codebook size over all subsets of the candidates, by enumeration.
// Costs come from the transport solver, which test_measures checks against vertex enumeration.
std::size_t brute_q(const MeasureEnsemble& ensemble, const std::vector<DiscreteMeasure>& candidates, int n,
                    const Rational& eps) {
  const std::size_t k = candidates.size();
  std::vector<std::vector<Rational>> cost(ensemble.size(), std::vector<Rational>(k));
  for (std::size_t a = 0; a < ensemble.size(); ++a)
    for (std::size_t r = 0; r < k; ++r)
      cost[a][r] = wasserstein(ensemble.atoms()[a].measure, candidates[r], 1, BowenContext{n}).power_cost;
  std::size_t best = k + 1;
  for (std::uint64_t set = 1; set < (std::uint64_t{1} << k); ++set) {
    Rational total = 0;
    for (std::size_t a = 0; a < ensemble.size(); ++a) {
      std::optional<Rational> nearest;
      for (std::size_t r = 0; r < k; ++r)
        if ((set >> r & 1) && (!nearest || cost[a][r] < *nearest)) nearest = cost[a][r];
      total += ensemble.atoms()[a].weight * *nearest;
    }
    if (total <= eps) best = std::min(best, static_cast<std::size_t>(std::popcount(set)));
  }
  return best;
}

}  // namespace

TEST_CASE("ensemble construction") {
  auto s = full2();
  auto a = orbit(s, "0", 4), b = orbit(s, "01", 4);
  auto merged = MeasureEnsemble({{a, Rational(1, 4)}, {b, Rational(1, 2)}, {a, Rational(1, 4)}});
  CHECK(merged.size() == 2);
  CHECK_THROWS_AS(MeasureEnsemble({{a, Rational(1, 2)}}), InvalidArgument);
  auto bary = MeasureEnsemble::uniform({a, b}).barycenter();
  CHECK(bary.atoms().size() == 3);
  CHECK(bary.atoms()[0].weight == Rational(1, 2));
}

TEST_CASE("single-atom ensembles need one code vector") {
  auto s = full2();
  std::mt19937_64 rng(71);
  for (int i = 0; i < 20; ++i) {
    auto mu = random_measure(s, rng, 4, 5);
    for (const Rational& eps : {Rational(0), Rational(1, 16), Rational(1, 2)}) {
      auto q = quantization(MeasureEnsemble::single(mu), 3, eps);
      CHECK(q.q == 1);
      CHECK(q.exact);
    }
  }
}

TEST_CASE("two separated orbit measures need two code vectors") {
  auto s = full2();
  auto a = orbit(s, "0", 6), b = orbit(s, "1", 6);
  const Rational eps(1, 5);
  const int n = 3;
  CHECK(wasserstein(a, b, 1, BowenContext{n}).power_cost > 4 * eps);
  auto q = quantization(MeasureEnsemble::uniform({a, b}), n, eps);
  CHECK(q.q == 2);
  CHECK(q.lower == 2);
  CHECK(q.exact);
  CHECK(q.cost == 0);
  // Any single code vector c pays at least W(a, b)/2 by the triangle inequality.
  for (const auto& c : mixture_candidates({a, b}, 8, 400))
    CHECK(codebook_cost(MeasureEnsemble::uniform({a, b}), {c}, n) > eps);
}

TEST_CASE("exhaustive search matches subset enumeration") {
  auto s = full2();
  std::mt19937_64 rng(72);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<DiscreteMeasure> atoms;
    const std::size_t k = 2 + rng() % 3;
    for (std::size_t i = 0; i < k; ++i) atoms.push_back(random_orbit(s, rng, 6));
    auto ensemble = MeasureEnsemble({{atoms[0], Rational(1, 2)}, {atoms[1], Rational(1, 2)}});
    if (k > 2) {
      std::vector<EnsembleAtom> parts;
      auto w = oracle::random_weights(rng, k);
      for (std::size_t i = 0; i < k; ++i) parts.push_back({atoms[i], w[i]});
      ensemble = MeasureEnsemble(parts);
    }
    std::vector<DiscreteMeasure> distinct;
    for (const auto& a : ensemble.atoms()) distinct.push_back(a.measure);
    auto candidates = mixture_candidates(distinct, 2, 400);
    if (candidates.size() > 12) continue;
    const int n = 1 + static_cast<int>(rng() % 3);
    const Rational eps(static_cast<long>(rng() % 5), 16);
    QuantizationOptions options;
    options.exact_max = candidates.size();
    options.candidates = candidates;
    auto q = quantization(ensemble, n, eps, options);
    CHECK(q.exhaustive);
    CHECK(q.q == brute_q(ensemble, candidates, n, eps));
    CHECK(q.cost <= eps);
    CHECK(q.lower <= q.q);
    ++compared;
  }
  MESSAGE("compared ", compared);
  CHECK(compared >= 20);
}

TEST_CASE("Q is non-increasing in eps") {
  auto s = full2();
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DiscreteMeasure> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back(random_orbit(s, rng, 6));
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    auto ensemble = MeasureEnsemble::uniform(atoms);
    QuantizationOptions options;
    options.candidates = atoms;
    options.exact_max = atoms.size();
    std::size_t previous = atoms.size() + 1;
    for (int k = 0; k <= 6; ++k) {
      const Rational eps = Rational(6 - k, 8);
      auto q = quantization(ensemble, 2, eps, options);
      CHECK(q.q >= 1);
      if (k > 0) CHECK(q.q >= previous);
      previous = q.q;
    }
  }
}

TEST_CASE("mass domination: rho >= c rho_1 gives Q(rho, eps) >= Q(rho_1, eps / c)") {
  auto s = full2();
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<DiscreteMeasure> atoms;
    for (int i = 0; i < 5; ++i) atoms.push_back(random_orbit(s, rng, 6));
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (atoms.size() < 3) continue;
    const std::size_t inner = 2 + rng() % (atoms.size() - 1);
    std::vector<DiscreteMeasure> sub(atoms.begin(), atoms.begin() + static_cast<long>(inner));
    auto rho1 = MeasureEnsemble::uniform(sub);
    const Rational c(1, 1 + static_cast<long>(rng() % 4));
    std::vector<EnsembleAtom> parts;
    for (const auto& a : rho1.atoms()) parts.push_back({a.measure, c * a.weight});
    auto rest = oracle::random_weights(rng, atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) parts.push_back({atoms[i], (1 - c) * rest[i]});
    auto rho = MeasureEnsemble(parts);

    QuantizationOptions options;
    options.candidates = atoms;
    options.exact_max = atoms.size();
    const Rational eps(static_cast<long>(rng() % 4), 32);
    auto big = quantization(rho, 2, eps, options);
    auto small = quantization(rho1, 2, eps / c, options);
    CHECK(big.exhaustive);
    CHECK(small.exhaustive);
    CHECK(big.q >= small.q);
  }
}

TEST_CASE("measure emergence of periodic orbit measures is 1") {
  auto s = full2();
  std::mt19937_64 rng(75);
  for (int i = 0; i < 20; ++i) {
    auto mu = random_orbit(s, rng, 10);
    REQUIRE(is_invariant(mu));
    auto report = measure_emergence(MeasureEnsemble::single(mu), {1, 8}, {Rational(1, 4), Rational(1, 16)});
    for (const auto& c : report.cells) {
      CHECK(c.upper == 1);
      CHECK(c.exact);
    }
    for (const auto& fit : report.double_log) CHECK(fit.upper == 0);
  }
  auto far = MeasureEnsemble::uniform({orbit(s, "0", 10), orbit(s, "1", 10)});
  auto two = measure_emergence(far, {1, 4}, {Rational(1, 8)});
  for (const auto& c : two.cells) CHECK(c.upper == 2);
  CHECK_THROWS_AS(measure_emergence(MeasureEnsemble::single(DiscreteMeasure::dirac(s, word_from_string("0110"))), {1, 2},
                                    {Rational(1, 4)}),
                  InvalidArgument);
}

TEST_CASE("spanning families bound Q from above") {
  auto s = full2();
  std::mt19937_64 rng(76);
  const int n = 2;
  const Rational eps(1, 4);
  auto cover = bolley_cover(s, n, eps, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DiscreteMeasure> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back(random_orbit(s, rng, cover.resolution));
    auto ensemble = MeasureEnsemble::uniform(atoms);
    std::vector<DiscreteMeasure> spanning;
    for (const auto& a : ensemble.atoms()) spanning.push_back(cover.project(a.measure));
    std::sort(spanning.begin(), spanning.end());
    spanning.erase(std::unique(spanning.begin(), spanning.end()), spanning.end());
    QuantizationOptions options;
    options.spanning = spanning;
    auto q = quantization(ensemble, n, eps, options);
    REQUIRE(q.spanning_size);
    CHECK(q.q <= spanning.size());
    CHECK(BigInt(static_cast<unsigned long>(q.q)) <= cover.family_size);
  }
}

TEST_CASE("pointwise emergence") {
  auto s = full2();
  auto a = orbit(s, "01", 8);
  auto single = pointwise_emergence({a}, 3, Rational(1, 8));
  CHECK(single.count == 1);
  CHECK(single.exact);
  auto far = pointwise_emergence({orbit(s, "0", 8), orbit(s, "1", 8)}, 3, Rational(1, 8));
  CHECK(far.count == 2);
  CHECK(far.exact);
  auto coarse = pointwise_emergence({orbit(s, "0", 8), orbit(s, "1", 8), a}, 0, Rational(1));
  CHECK(coarse.count == 1);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DiscreteMeasure> vx;
    for (int i = 0; i < 4; ++i) vx.push_back(random_orbit(s, rng, 8));
    std::sort(vx.begin(), vx.end());
    vx.erase(std::unique(vx.begin(), vx.end()), vx.end());
    auto r = pointwise_emergence(vx, 2, Rational(1, 8));
    CHECK(r.count <= vx.size());
    for (const auto& mu : vx) {
      bool covered = false;
      for (const auto& c : r.centers) covered = covered || wasserstein(mu, c, 1, BowenContext{2}).power_cost <= Rational(1, 8);
      CHECK(covered);
    }
  }
}
