#pragma once

// Reference computations for tests. None of these call the library's distance,
// transport or counting code; they only read its value types.

#include <cstdint>
#include <random>
#include <vector>

#include "emergence/hyperspace.hpp"
#include "emergence/measures.hpp"

namespace oracle {

using emergence::BigInt;
using emergence::DiscreteMeasure;
using emergence::FiniteClosedSet;
using emergence::Rational;
using emergence::SymbolicSystem;
using emergence::Word;

// d(a, b) = lambda^(first mismatch), 0 for identical words.
Rational base_distance(const SymbolicSystem& system, const Word& a, const Word& b);
// d_n(a, b) = max_{i<n} d(f^i a, f^i b), literally over the shifted words.
Rational bowen_distance(const SymbolicSystem& system, const Word& a, const Word& b, int n);

// Minimum-cost transport by enumerating every spanning-tree basis of the
// bipartite graph (all vertices of the transportation polytope).
Rational transport_vertices(const std::vector<Rational>& supply, const std::vector<Rational>& demand,
                            const std::vector<Rational>& cost);
// Equal-size uniform marginals: minimum over permutations (Birkhoff).
Rational transport_permutations(std::size_t size, const std::vector<Rational>& cost);

// W_p^p between measures, via transport_vertices with ground cost d_n^p (n = 0: d).
Rational wasserstein_power(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p, int n);

// LP from the Borel-set definition, every subset of the joint support.
Rational levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n);

// H^n by max-min over word pairs (n = 0: static d).
Rational hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c, int n);

// Admissible words of the given length by checking all m^length strings.
std::uint64_t count_words_brute(const SymbolicSystem& system, int length);

// Binomial coefficient by Pascal's triangle.
BigInt pascal(unsigned n, unsigned k);

std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t count, int max_units = 6);

}  // namespace oracle
