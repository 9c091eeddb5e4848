#pragma once

// Finite-grid estimators: topological entropy, entropy orders of the induced
// measure and hyperspace systems, metric order and box dimension.
//
// Each cell carries a certified count bracket. Slopes are least-squares fits
// over the top half of the n range; log log of counts <= 1 is taken as 0.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emergence/certificates.hpp"
#include "emergence/counting.hpp"

namespace emergence {

enum class ReportMode { entropy, entropy_order, metric_order, dimension };

std::string to_string(ReportMode mode);

struct ScalingCell {
  int n = 0;  // 0 for static (n-free) cells
  Rational eps;
  BigInt lower;
  BigInt upper;
  bool exact = false;     // lower == upper and both are proven
  bool bound_ok = true;   // cell-specific inequality (see the producing estimator)
  std::string witness;    // short description of the lower-bound witness
};

// Per-eps fitted exponents from the lower and upper counts.
struct SlopeFit {
  Rational eps;
  double lower = 0;
  double upper = 0;
  // Entropy mode with exact power-of-m counts: slope / log m as a rational.
  std::optional<Rational> exact_over_log_m;
};

struct ScalingReport {
  ReportMode mode = ReportMode::entropy;
  std::vector<ScalingCell> cells;
  std::vector<SlopeFit> single_log;  // log(count) / n
  std::vector<SlopeFit> double_log;  // log log(count) / n
  std::vector<SlopeFit> ratios;      // static modes: transformed count / (-log eps)
  std::vector<std::string> notes;

  // Fits ordered by decreasing eps (the eps -> 0 trend of the primary transform).
  const std::vector<SlopeFit>& eps_trend() const;
  const ScalingCell& cell(int n, const Rational& eps) const;
};

// log log x with the convention x <= 1 -> 0.
double log_log(const BigInt& count);

// Least-squares slope of (x, y) over the trailing half of the points (at least two).
double top_half_slope(const std::vector<double>& x, const std::vector<double>& y);

// Fill single_log / double_log (n modes) or ratios (static modes) from the cells.
void fit_report(ScalingReport& report, int alphabet_size);

struct IntRange {
  int lo = 1;
  int hi = 1;
  std::vector<int> values() const;
};

// Exact N(f, n, eps) = S(f, n, eps) by cylinder-class counting.
ScalingReport entropy_estimate(const SystemHandle& system, const IntRange& n_range,
                               const std::vector<Rational>& eps_grid);

struct OrderPolicy {
  std::size_t samples = 32;     // random elements checked against each upper family
  std::uint64_t seed = 0;
  std::size_t code_cap = 512;   // largest code length used for lower families
  SampleOptions pairs;          // certificate pair sampling
  unsigned workers = 0;
};

// Upper cells: Bolley family at delta = eps (bound_ok records
// log log |family| <= log N(f, n, eps/2) + log log(8 e D / eps) and that every
// sample was spanned). Lower cells: Hamming certificate over apart Diracs at
// (n, 4 eps), or the closed-class Dirac family when that is larger.
ScalingReport measure_space_entropy_order(const SystemHandle& system, const IntRange& n_range,
                                          const std::vector<Rational>& eps_grid,
                                          const OrderPolicy& policy = {});

// Upper cells: 2^N(f, n, eps) - 1 nonempty subsets of an open eps-cover,
// with policy.samples random closed sets checked to lie within eps of their
// traced subset (bound_ok). Lower cells: verified B_phi family or separated singletons.
ScalingReport hyperspace_entropy_order(const SystemHandle& system, const IntRange& n_range,
                                       const std::vector<Rational>& eps_grid,
                                       const OrderPolicy& policy = {});

// Static count bracket per eps.
using StaticCounter = std::function<CountBracket(const Rational& eps)>;

ScalingReport metric_order_estimate(const StaticCounter& counter, const std::vector<Rational>& eps_grid,
                                    ReportMode mode = ReportMode::metric_order);

// Box dimension of (X, d): N(X, eps) exact.
ScalingReport dimension_estimate(const SystemHandle& system, const std::vector<Rational>& eps_grid);

// Hyperspace K(X) under H: upper 2^N(X, eps) - 1, lower from a verified static
// B_phi family (or separated singletons). Notes record whether each cell's
// ratio bracket contains the box dimension ratio.
struct Sandwich {
  ScalingReport dimension;
  ScalingReport hyperspace;
  bool contains_dimension = false;  // dim(X) inside [lower, upper] ratio at every eps
  double dimension_limit = 0;       // least-squares slope of log N(X, eps) against -log eps
};

Sandwich hyperspace_sandwich(const SystemHandle& system, const std::vector<Rational>& eps_grid,
                             const OrderPolicy& policy = {});

// M(X) under W_1 (static): upper Bolley family at n = 1, lower Hamming family.
ScalingReport measure_metric_order(const SystemHandle& system, const std::vector<Rational>& eps_grid,
                                   const OrderPolicy& policy = {});

// Powers lambda^k for k in the range.
std::vector<Rational> lambda_grid(const SymbolicSystem& system, const IntRange& exponents);

}  // namespace emergence
