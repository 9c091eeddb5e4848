#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

#include "emergence/estimators.hpp"

using namespace emergence;

namespace {

SystemHandle full(int m) { return make_handle(SymbolicSystem::full_shift(m)); }
SystemHandle golden() { return make_handle(SymbolicSystem::subshift({{true, true}, {true, false}})); }

// Spectral radius of a 0/1 matrix by power iteration.
double spectral_radius(const std::vector<std::vector<bool>>& a) {
  const std::size_t m = a.size();
  std::vector<double> v(m, 1.0);
  double radius = 0;
  for (int it = 0; it < 2000; ++it) {
    std::vector<double> next(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (a[i][j]) next[i] += v[j];
    double norm = 0;
    for (double x : next) norm = std::max(norm, x);
    radius = norm;
    for (auto& x : next) x /= norm;
    v = next;
  }
  return radius;
}

}  // namespace

TEST_CASE("slope helpers") {
  CHECK(log_log(BigInt(1)) == 0);
  CHECK(log_log(BigInt(0)) == 0);
  CHECK(log_log(BigInt(100)) == doctest::Approx(std::log(std::log(100.0))));
  CHECK(top_half_slope({1, 2, 3, 4}, {0, 0, 5, 7}) == doctest::Approx(2.0));
  CHECK(top_half_slope({1, 2, 3}, {1, 3, 4}) == doctest::Approx(1.0));
}

TEST_CASE("full shift m = 2: exact cylinder pattern and slope log 2") {
  auto s = full(2);
  auto report = entropy_estimate(s, {1, 12}, lambda_grid(*s, {1, 4}));
  for (const auto& c : report.cells) {
    const int k = s->open_exponent(c.eps) - 1;
    CHECK(c.exact);
    CHECK(c.lower == BigInt(1) << static_cast<unsigned>(c.n + k));
    CHECK(c.upper == c.lower);
  }
  REQUIRE(report.single_log.size() == 4);
  for (const auto& fit : report.single_log) {
    REQUIRE(fit.exact_over_log_m);
    CHECK(*fit.exact_over_log_m == 1);
    CHECK(fit.lower == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("full shift m = 3: slope log 3") {
  auto s = full(3);
  auto report = entropy_estimate(s, {1, 8}, lambda_grid(*s, {1, 3}));
  for (const auto& fit : report.single_log) {
    REQUIRE(fit.exact_over_log_m);
    CHECK(*fit.exact_over_log_m == 1);
    CHECK(fit.upper == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("golden mean slope against the transfer-matrix eigenvalue") {
  auto s = golden();
  const double expected = std::log(spectral_radius(s->transitions()));
  CHECK(expected == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  auto report = entropy_estimate(s, {10, 40}, lambda_grid(*s, {1, 3}));
  // Golden-mean words of length L number Fib(L + 2).
  auto fib = [](int k) {
    BigInt a = 0, b = 1;
    for (int i = 0; i < k; ++i) {
      BigInt t = a + b;
      a = b;
      b = t;
    }
    return a;
  };
  for (int len = 1; len <= 10; ++len) CHECK(fib(len + 2) == oracle::count_words_brute(*s, len));
  for (const auto& c : report.cells) CHECK(c.lower == fib(ball_resolution(*s, c.n, c.eps, CoverConvention::open) + 2));
  for (const auto& fit : report.single_log) CHECK(std::abs(fit.lower - expected) < 1e-6);
}

TEST_CASE("single-point system has zero entropy and orders") {
  auto s = full(1);
  auto grid = std::vector<Rational>{Rational(1, 4), Rational(1, 8)};
  auto ent = entropy_estimate(s, {1, 6}, grid);
  for (const auto& fit : ent.single_log) CHECK(fit.lower == 0);
  auto measures = measure_space_entropy_order(s, {1, 4}, grid);
  for (const auto& fit : measures.double_log) CHECK(fit.upper == 0);
  auto sets = hyperspace_entropy_order(s, {1, 4}, grid);
  for (const auto& fit : sets.double_log) CHECK(fit.upper == 0);
  auto dim = dimension_estimate(s, grid);
  for (const auto& fit : dim.ratios) CHECK(fit.upper == 0);
}

TEST_CASE("measure-space cells at n = 6, eps = 1/8") {
  auto s = full(2);
  OrderPolicy policy;
  policy.samples = 40;
  auto report = measure_space_entropy_order(s, {6, 6}, {Rational(1, 8)}, policy);
  const auto& c = report.cell(6, Rational(1, 8));
  CHECK(c.bound_ok);
  const double half = std::log(static_cast<double>(point_count(*s, 6, Rational(1, 16))));
  CHECK(log_log(c.upper) <= half + std::log(std::log(8 * std::exp(1.0) * 8)));
  CHECK(c.lower >= BigInt(1) << 16);
  CHECK(c.lower <= c.upper);
}

TEST_CASE("measure-space lower slope at fine scale") {
  auto s = full(2);
  auto report = measure_space_entropy_order(s, {4, 8}, {Rational(1, 4), Rational(1, 8)});
  for (const auto& c : report.cells) CHECK(c.bound_ok);
  CHECK(report.double_log.back().lower >= 0.8 * std::log(2.0));
  CHECK(report.double_log.back().upper >= report.double_log.back().lower);
}

TEST_CASE("hyperspace upper cell is the nonempty power set") {
  auto s = full(2);
  OrderPolicy policy;
  policy.samples = 100;
  auto report = hyperspace_entropy_order(s, {3, 5}, {Rational(3, 10)}, policy);
  for (const auto& c : report.cells) {
    const auto points = point_count(*s, c.n, c.eps);
    CHECK(c.upper == (BigInt(1) << static_cast<unsigned>(points)) - 1);
    CHECK(c.bound_ok);
    CHECK(log_log(c.upper + 1) == doctest::Approx((std::log(static_cast<double>(points)) + std::log(std::log(2.0)))));
  }
  const auto& five = report.cell(5, Rational(3, 10));
  CHECK(five.lower >= BigInt(1) << 7);
}

TEST_CASE("box dimension of the full shift") {
  auto s = full(2);
  auto grid = lambda_grid(*s, {1, 10});
  auto dim = dimension_estimate(s, grid);
  for (const auto& c : dim.cells) {
    const int k = s->open_exponent(c.eps) - 1;
    CHECK(c.upper == BigInt(1) << static_cast<unsigned>(k + 1));
  }
  CHECK(dim.ratios.back().upper == doctest::Approx(11.0 / 10.0));
  auto sandwich = hyperspace_sandwich(s, lambda_grid(*s, {2, 4}), {});
  CHECK(sandwich.dimension_limit == doctest::Approx(1.0));
  CHECK(sandwich.contains_dimension);
}

TEST_CASE("reports are deterministic for a seed") {
  auto s = full(2);
  OrderPolicy policy;
  policy.seed = 17;
  auto a = measure_space_entropy_order(s, {3, 5}, {Rational(1, 4)}, policy);
  auto b = measure_space_entropy_order(s, {3, 5}, {Rational(1, 4)}, policy);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].lower == b.cells[i].lower);
    CHECK(a.cells[i].witness == b.cells[i].witness);
  }
}
