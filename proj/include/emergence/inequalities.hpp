#pragma once

// Seeded property suite for the metric comparisons on M(X) and K(X).
// Every comparison is decided exactly: fractional powers are cleared by
// raising both sides to a common integer power.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emergence/hyperspace.hpp"
#include "emergence/measures.hpp"

namespace emergence {

struct SuiteOptions {
  std::size_t measure_pairs = 500;
  std::size_t set_pairs = 500;
  int max_support = 6;
  int max_length = 6;
  std::uint64_t seed = 0;
};

struct SuiteReport {
  std::map<std::string, std::size_t> checks;
  std::map<std::string, std::size_t> violations;
  std::vector<std::string> examples;  // first few violations, human readable
  std::size_t total_violations() const;
};

// Checks on one measure pair at horizon n (n <= every atom length):
//   wasserstein_holder   W_q <= W_p <= D^(1 - q/p) W_q^(q/p), 1 <= q <= p <= 3
//   lp_holder            LP^(1 + 1/p) <= W_p <= (1 + D^p)^(1/p) LP^(1/p)
//   bowen_wasserstein    W_{p,n} <= W_p^n
//   bowen_lp             LP_n <= LP^n
void check_measure_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n, SuiteReport& report);

// hausdorff_bowen: H_n <= H^n <= H_n + max(diam(B, d_n), diam(C, d_n)).
void check_set_pair(const FiniteClosedSet& b, const FiniteClosedSet& c, int n, SuiteReport& report);

SuiteReport run_metric_suite(const SystemHandle& system, const SuiteOptions& options = {});

}  // namespace emergence
