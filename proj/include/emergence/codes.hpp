#pragma once

// Binary constant-weight codes: length-N vectors with exactly N/2 ones and
// pairwise Hamming distance > N/4. Codewords are bit-packed into uint64 words.

#include <cstdint>
#include <vector>

#include "emergence/rational.hpp"

namespace emergence {

using Codeword = std::vector<std::uint64_t>;

std::size_t hamming_distance(const Codeword& a, const Codeword& b);
std::size_t weight(const Codeword& a);
bool bit(const Codeword& a, std::size_t i);

class HalfWeightCode {
 public:
  enum class Construction { greedy, concatenated };

  // Lexicographic first-fit over all half-weight vectors up to this length.
  static constexpr std::size_t kGreedyMaxLength = 24;

  // N must be a positive multiple of 8. Greedy for N <= 24; beyond that an
  // outer Reed-Solomon code over GF(p) with greedy length-16 inner blocks.
  static HalfWeightCode build(std::size_t length);
  // Built once per length and kept for the life of the process.
  static const HalfWeightCode& shared(std::size_t length);

  std::size_t length() const { return length_; }
  std::size_t words() const { return (length_ + 63) / 64; }
  const BigInt& size() const { return size_; }
  Construction construction() const { return construction_; }
  // Proven lower bound on the distance of distinct codewords.
  std::size_t distance_bound() const { return distance_bound_; }

  // Codeword number `index` (0 <= index < size).
  Codeword codeword(const BigInt& index) const;
  Codeword codeword(std::uint64_t index) const { return codeword(BigInt(static_cast<unsigned long>(index))); }

  // Outer parameters (concatenated construction only).
  unsigned long field() const { return field_; }
  std::size_t outer_length() const { return outer_length_; }
  std::size_t outer_dimension() const { return outer_dimension_; }
  std::size_t inner_distance() const { return inner_distance_; }

 private:
  std::size_t length_ = 0;
  BigInt size_;
  Construction construction_ = Construction::greedy;
  std::size_t distance_bound_ = 0;
  std::vector<Codeword> greedy_words_;

  unsigned long field_ = 0;
  std::size_t outer_length_ = 0, outer_dimension_ = 0, inner_distance_ = 0;
  std::vector<std::uint16_t> inner_;  // length-16 inner codewords
};

// Greedy half-weight code of the given length with pairwise distance >= min_distance.
std::vector<Codeword> greedy_constant_weight(std::size_t length, std::size_t min_distance);

// Combinatorial facts behind the code size.
struct CodeCounts {
  std::size_t length = 0;
  BigInt half_weight;      // C(N, N/2)
  bool stirling = false;   // C(N, N/2) >= (2N)^(-1/2) 2^N
  BigInt ball;             // half-weight vectors within N/4 of a fixed one
  double log_ball = 0;
  double log_ball_bound = 0;  // N log 2 - pi N / 64
  bool bernstein = false;  // log_ball <= log_ball_bound
};

CodeCounts code_counts(std::size_t length);

}  // namespace emergence
