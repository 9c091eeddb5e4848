#pragma once

// Symbolic dynamical systems (full shifts and subshifts of finite type) with
// the lambda-ultrametric d(x, y) = lambda^j, j the first index where x and y
// disagree. Points are finite words standing for their cylinders; two equal
// words are the same point.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "emergence/rational.hpp"

namespace emergence {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

Word word_from_string(std::string_view digits);
std::string word_to_string(std::span<const Symbol> word);

class SymbolicSystem {
 public:
  static SymbolicSystem full_shift(int m, Rational lambda = Rational(1, 2));
  // transitions[a][b] == true when b may follow a.
  static SymbolicSystem subshift(std::vector<std::vector<bool>> transitions,
                                 Rational lambda = Rational(1, 2));

  int alphabet_size() const { return m_; }
  const Rational& lambda() const { return lambda_; }
  bool is_full_shift() const { return full_; }
  bool allowed(Symbol a, Symbol b) const { return allowed_[a * m_ + b] != 0; }
  std::vector<std::vector<bool>> transitions() const;

  bool admissible(std::span<const Symbol> word) const;
  // Admissible, and the wrap-around transition last -> first is allowed too.
  bool cyclically_admissible(std::span<const Symbol> word) const;
  void validate(std::span<const Symbol> word) const;

  // lambda^e, cached for small exponents.
  Rational lambda_pow(int exponent) const;
  // diam X: 1 whenever X has two points, 0 for the one-symbol shift.
  Rational diameter() const;

  // Number of admissible words of length L (saturates at UINT64_MAX).
  std::uint64_t count_words(int length) const;

  // Smallest k with every entry of A^k positive; empty when A is not primitive.
  std::optional<int> primitivity_exponent() const;
  // Lexicographically smallest path a -> x_1 -> ... -> x_{steps-1} -> b; returns
  // the intermediate symbols, or nullopt when no path of exactly `steps` exists.
  std::optional<Word> connector(Symbol from, Symbol to, int steps) const;

  // Smallest e >= 0 with lambda^e < eps (open) or lambda^e <= eps (closed).
  int open_exponent(const Rational& eps) const;
  int closed_exponent(const Rational& eps) const;

  bool operator==(const SymbolicSystem& other) const {
    return m_ == other.m_ && lambda_ == other.lambda_ && allowed_ == other.allowed_;
  }

 private:
  SymbolicSystem(int m, std::vector<std::uint8_t> allowed, bool full, Rational lambda);

  int m_;
  std::vector<std::uint8_t> allowed_;
  bool full_;
  Rational lambda_;
  std::vector<Rational> powers_;
};

using SystemHandle = std::shared_ptr<const SymbolicSystem>;

inline SystemHandle make_handle(SymbolicSystem system) {
  return std::make_shared<const SymbolicSystem>(std::move(system));
}

// Throws SystemMismatch unless both handles describe the same system.
void require_same_system(const SystemHandle& a, const SystemHandle& b);

class CylinderPoint {
 public:
  CylinderPoint(SystemHandle system, Word word);
  CylinderPoint(SystemHandle system, std::string_view digits)
      : CylinderPoint(std::move(system), word_from_string(digits)) {}

  const SystemHandle& system() const { return system_; }
  const Word& word() const { return word_; }
  std::size_t length() const { return word_.size(); }
  std::string str() const { return word_to_string(word_); }

  bool operator==(const CylinderPoint& other) const {
    return word_ == other.word_ && *system_ == *other.system_;
  }

 private:
  SystemHandle system_;
  Word word_;
};

enum class MetricMode { bowen, mean };

struct BowenContext {
  int n = 1;
  MetricMode mode = MetricMode::bowen;
};

struct Distance {
  Rational value;
  bool exact = true;
};

// Bowen distances on this metric are always 0 or lambda^exponent.
struct PowerDistance {
  bool zero = false;
  int exponent = 0;
  bool exact = true;

  Rational value(const SymbolicSystem& system) const {
    return zero ? Rational(0) : system.lambda_pow(exponent);
  }
  // d < eps given e_open = system.open_exponent(eps).
  bool below_open(int e_open) const { return zero || exponent >= e_open; }
};

// d_n on words; n = 1 gives the base metric.
PowerDistance bowen_power(std::span<const Symbol> a, std::span<const Symbol> b, int n);

// Distance between raw words under the context (bowen max or mean average).
Distance word_distance(const SymbolicSystem& system, std::span<const Symbol> a,
                       std::span<const Symbol> b, const BowenContext& ctx);

Distance base_distance(const CylinderPoint& x, const CylinderPoint& y);
Distance bowen_distance(const CylinderPoint& x, const CylinderPoint& y, const BowenContext& ctx);

CylinderPoint shift(const CylinderPoint& x);
Word shift_word(std::span<const Symbol> word);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 26;

// All admissible words of length L in lexicographic order. Throws ResourceCap
// when the count exceeds `cap`.
std::vector<Word> enumerate_cylinders(const SymbolicSystem& system, int length,
                                      std::uint64_t cap = kDefaultEnumerationCap);
void for_each_cylinder(const SymbolicSystem& system, int length,
                       const std::function<void(const Word&)>& visit,
                       std::uint64_t cap = kDefaultEnumerationCap);

// Periodic continuation of a cyclic word to the requested length.
Word periodic_extension(std::span<const Symbol> cycle, int length);
// Rotation starting at offset r.
Word rotate(std::span<const Symbol> cycle, std::size_t r);
// Lexicographically least rotation (orbit representative).
Word canonical_rotation(std::span<const Symbol> cycle);

// Uniform draw in [0, bound) from a standard engine; portable across
// standard libraries, unlike std::uniform_int_distribution.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

// Admissible word of the given length, each symbol uniform among allowed successors.
Word random_word(const SymbolicSystem& system, int length, std::mt19937_64& rng);

}  // namespace emergence
