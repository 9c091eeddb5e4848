#pragma once

#include <optional>
#include <random>
#include <vector>

#include "emergence/systems.hpp"
#include "emergence/transport.hpp"

namespace emergence {

struct Atom {
  Word word;
  Rational weight;
  bool operator==(const Atom&) const = default;
};

// Finitely supported probability measure. Atoms are merged, zero weights
// dropped, and the remaining atoms kept in lexicographic word order.
class DiscreteMeasure {
 public:
  DiscreteMeasure(SystemHandle system, std::vector<Atom> atoms);

  static DiscreteMeasure dirac(const CylinderPoint& x);
  static DiscreteMeasure dirac(SystemHandle system, Word word);
  // Equal weights on the given words (duplicates accumulate).
  static DiscreteMeasure uniform(SystemHandle system, const std::vector<Word>& words);

  const SystemHandle& system() const { return system_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t min_length() const;
  std::size_t max_length() const;
  // Same words and weights (systems are compared separately).
  bool operator==(const DiscreteMeasure& other) const { return atoms_ == other.atoms_; }
  bool operator<(const DiscreteMeasure& other) const;

 private:
  SystemHandle system_;
  std::vector<Atom> atoms_;
};

struct TransportPlan {
  std::vector<transport::FlowEntry> entries;  // indices into the two atom lists
};

struct WassersteinResult {
  int p = 1;
  Rational power_cost;  // W_p^p, exact
  TransportPlan plan;
  bool exact = true;

  double value() const;
  // W_p itself as a rational when p = 1 (or the cost is 0).
  std::optional<Rational> exact_value() const;
};

// Ground distances that are inexact (distinct words agreeing on their
// overlap) are rejected unless `allow_inexact`, in which case they count as 0
// and the result is a lower bound flagged exact = false.
struct TransportOptions {
  bool allow_inexact = false;
};

WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p,
                              std::optional<BowenContext> ctx = std::nullopt,
                              TransportOptions options = {});

Rational levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        std::optional<BowenContext> ctx = std::nullopt,
                        TransportOptions options = {});

// max_{i<n} W_p^p(f^i mu, f^i nu).
Rational bowen_orbit_wasserstein_power(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p,
                                       int n);
// max_{i<n} LP(f^i mu, f^i nu).
Rational bowen_orbit_levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n);

DiscreteMeasure pushforward(const DiscreteMeasure& mu);
DiscreteMeasure pushforward_iterate(const DiscreteMeasure& mu, int times);

// (1/n) sum_{i<n} delta_{f^i x}, each shifted word cut to the common length L - n + 1.
DiscreteMeasure empirical_measure(const CylinderPoint& x, int n);

// Uniform measure on the rotations of a cyclic word, each continued periodically
// to `resolution` symbols.
DiscreteMeasure periodic_orbit_measure(SystemHandle system, const Word& cycle, int resolution);

// W_1 under d_n computed from cylinder mass imbalances (ultrametric tree
// formula). Requires every atom of both measures to have the same length.
Rational ultrametric_w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n);

// Random measure: 1..max_support atoms of the given length, integer weights 1..8 normalized.
DiscreteMeasure random_measure(SystemHandle system, std::mt19937_64& rng, int max_support,
                               int length);

}  // namespace emergence
