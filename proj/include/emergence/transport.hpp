#pragma once

// Exact balanced transportation problem solved as min-cost flow
// (successive shortest paths with Dijkstra and node potentials). Supplies and
// costs are scaled to integers by their common denominators; machine integers
// are used when the scaled problem provably fits, GMP integers otherwise.

#include <cstddef>
#include <span>
#include <vector>

#include "emergence/rational.hpp"

namespace emergence::transport {

struct FlowEntry {
  std::size_t source;
  std::size_t target;
  Rational mass;
};

struct FlowResult {
  Rational cost;
  std::vector<FlowEntry> plan;  // nonzero entries only, sorted by (source, target)
};

// cost is row-major, supply.size() x demand.size(), all entries >= 0.
// Supplies and demands must be nonnegative with equal totals.
FlowResult solve(std::span<const Rational> supply, std::span<const Rational> demand,
                 std::span<const Rational> cost);

}  // namespace emergence::transport
