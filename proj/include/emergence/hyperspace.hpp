#pragma once

#include <vector>

#include "emergence/systems.hpp"

namespace emergence {

// Nonempty finite set of equal-length words: an element of K(X) at that resolution.
class FiniteClosedSet {
 public:
  FiniteClosedSet(SystemHandle system, std::vector<Word> points);

  const SystemHandle& system() const { return system_; }
  const std::vector<Word>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t resolution() const { return points_.front().size(); }
  // Points laid out back to back, resolution() bytes each.
  const std::vector<Symbol>& packed() const { return packed_; }

  bool contains(const Word& w) const;
  bool operator==(const FiniteClosedSet& other) const { return points_ == other.points_; }
  bool operator<(const FiniteClosedSet& other) const { return points_ < other.points_; }

 private:
  SystemHandle system_;
  std::vector<Word> points_;
  std::vector<Symbol> packed_;
};

// H (ctx absent or n = 1) or H^n. Sets must share the resolution.
Rational hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c,
                   std::optional<BowenContext> ctx = std::nullopt);
// Bowen-mode H^n as a power of lambda.
PowerDistance hausdorff_power(const FiniteClosedSet& b, const FiniteClosedSet& c, int n);

// max_{i<n} H(f^i B, f^i C).
Rational bowen_orbit_hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c, int n);

// Largest pairwise distance inside the set under d (or d_n).
Rational set_diameter(const FiniteClosedSet& b, std::optional<BowenContext> ctx = std::nullopt);

FiniteClosedSet image_set(const FiniteClosedSet& b);
FiniteClosedSet truncate(const FiniteClosedSet& b, std::size_t resolution);
FiniteClosedSet set_union(const FiniteClosedSet& b, const FiniteClosedSet& c);

// Union of full orbits of the cyclic words, continued to `resolution` symbols.
FiniteClosedSet periodic_fixed_set(SystemHandle system, const std::vector<Word>& cycles,
                                   int resolution);
// image_set(B) equals B cut to one symbol less.
bool is_fixed(const FiniteClosedSet& b);

}  // namespace emergence
