#pragma once

// Covering and packing numbers over finite metric views, exact counts for the
// ultrametric point spaces, apart/split families, and the Bolley measure cover.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "emergence/certificates.hpp"
#include "emergence/hyperspace.hpp"
#include "emergence/measures.hpp"

namespace emergence {

// Covering balls: open (d < eps) or closed (d <= eps).
enum class CoverConvention { open, closed };
// Separation: d >= eps or d > eps.
enum class SeparationConvention { at_least, greater };

// Point spaces pair open covers with >= separation; measure and set spaces pair
// closed covers with > separation. Both keep S(2 eps) <= N(eps) <= S(eps).
struct Conventions {
  CoverConvention cover;
  SeparationConvention separation;
  static Conventions points() { return {CoverConvention::open, SeparationConvention::at_least}; }
  static Conventions measures() { return {CoverConvention::closed, SeparationConvention::greater}; }
};

bool covers(const Rational& d, const Rational& eps, CoverConvention c);
bool separated(const Rational& d, const Rational& eps, SeparationConvention s);

enum class Strategy { greedy, exact };

struct CountBracket {
  BigInt lower;  // certified packing size
  BigInt upper;  // certified covering size
  std::optional<BigInt> exact;
};

// Dense table of exact distances, rows x cols (rows = candidates, cols = elements
// for covers; square for packings).
class DistanceTable {
 public:
  using Metric = std::function<Rational(std::size_t, std::size_t)>;

  // Parallel over rows with `workers` threads (0 = hardware concurrency). When
  // `cache_key` is nonempty and EMERGENCE_LAB_CACHE names a directory, the
  // table is read from / written to a file derived from the key.
  static DistanceTable build(std::size_t rows, std::size_t cols, const Metric& metric,
                             bool symmetric = false, unsigned workers = 0,
                             const std::string& cache_key = "");

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Rational& at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> values_;
};

struct PackingResult {
  std::size_t count = 0;
  std::vector<std::size_t> witness;  // indices, pairwise separated
};

struct CoverResult {
  std::size_t count = 0;
  std::vector<std::size_t> centers;  // row indices covering every column
};

inline constexpr std::size_t kExactCap = 20;

struct SearchOptions {
  Strategy strategy = Strategy::greedy;
  int restarts = 8;  // seeded shuffled passes on top of the lexicographic one
  std::uint64_t seed = 0;
  std::size_t exact_cap = kExactCap;
};

PackingResult packing_count(const DistanceTable& table, const Rational& eps, SeparationConvention sep,
                            const SearchOptions& options = {});
// Throws Error when the candidates cannot cover every element.
CoverResult covering_count(const DistanceTable& table, const Rational& eps, CoverConvention cover,
                           const SearchOptions& options = {});

// Ultrametric point spaces: d_n-balls at scale eps are the cylinders of this length.
int ball_resolution(const SymbolicSystem& system, int n, const Rational& eps, CoverConvention cover);
// N(f, n, eps) = S(f, n, eps) on X: admissible words of length ball_resolution.
std::uint64_t point_count(const SymbolicSystem& system, int n, const Rational& eps,
                          CoverConvention cover = CoverConvention::open);
// Number of distinct length-`prefix` classes among the words (sorted LCP scan).
std::size_t prefix_classes(std::vector<Word> words, std::size_t prefix);
// One word per class: the lexicographically first admissible word of each
// length-`prefix` cylinder, continued to `resolution` symbols.
std::vector<Word> class_representatives(const SymbolicSystem& system, int prefix, int resolution);
// Lexicographically smallest admissible continuation of `word` to `length`.
Word extend_min(const SymbolicSystem& system, const Word& word, int length);

struct FamilyResult {
  std::size_t count = 0;
  std::vector<std::size_t> witness;
};

// Greedy pairwise (n, eps)-apart subfamily: min support distance >= eps.
FamilyResult apart_count(const std::vector<DiscreteMeasure>& measures, int n, const Rational& eps);
// Greedy pairwise (n, eps)-split subfamily: min cross distance > eps.
FamilyResult split_count(const std::vector<FiniteClosedSet>& sets, int n, const Rational& eps);

struct BolleyCover {
  int n = 1;
  int p = 1;
  Rational delta;
  int center_resolution = 0;        // cylinder length of the delta/2 cover
  int resolution = 0;               // word length of centers and sampled measures
  std::vector<Word> centers;        // K closed-ball centers
  std::uint64_t grid = 0;           // weights are multiples of 1/grid
  BigInt family_size;               // C(grid + K - 1, K - 1)
  double log_family_size = 0;
  double log_bound = 0;             // p K log(8 e D / delta)
  bool within_bound = false;
  std::size_t sampled = 0;
  std::size_t spanned = 0;          // samples found within delta

  // Nearest family member: atoms moved to their centers, weights rounded to the grid.
  DiscreteMeasure project(const DiscreteMeasure& mu) const;
};

// Family of measures on a closed delta/2-cover of (X, d_n) with grid weights;
// `samples` random measures at `resolution` are checked to lie within delta in W_p^n.
BolleyCover bolley_cover(const SystemHandle& system, int n, const Rational& delta, int p,
                         std::size_t samples = 0, std::uint64_t seed = 0, int resolution = 0);

struct RecountResult {
  bool passed = true;
  std::size_t compared = 0;  // witnesses or pairs re-counted
  std::string first_failure;
};

// Re-checks a certificate's witnesses with the counting path: apart_count and
// split_count for base-only families, transport-based W_1^n or kernel
// Hausdorff tables fed to packing_count for coded families (all witnesses
// when at most 32, otherwise the recorded pairs).
RecountResult recount_certificate(const Certificate& cert, unsigned workers = 0);

}  // namespace emergence
