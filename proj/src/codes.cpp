#include "emergence/codes.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "emergence/kernels.hpp"

namespace emergence {

namespace {

constexpr std::size_t kInnerLength = 16;

bool is_prime(unsigned long v) {
  if (v < 2) return false;
  for (unsigned long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

unsigned long largest_prime_at_most(unsigned long v) {
  while (v >= 2 && !is_prime(v)) --v;
  return v;
}

// Next integer with the same popcount (Gosper).
std::uint64_t next_same_weight(std::uint64_t v) {
  std::uint64_t c = v & (~v + 1);
  std::uint64_t r = v + c;
  return (((r ^ v) >> 2) / c) | r;
}

const std::vector<Codeword>& inner_code(std::size_t min_distance) {
  static std::mutex guard;
  static std::vector<Codeword> d6, d8;
  std::lock_guard lock(guard);
  auto& slot = min_distance == 6 ? d6 : d8;
  if (slot.empty()) slot = greedy_constant_weight(kInnerLength, min_distance);
  return slot;
}

}  // namespace

std::size_t hamming_distance(const Codeword& a, const Codeword& b) {
  return static_cast<std::size_t>(kernels::popcount_xor(a.data(), b.data(), a.size()));
}

std::size_t weight(const Codeword& a) { return static_cast<std::size_t>(kernels::popcount(a.data(), a.size())); }

bool bit(const Codeword& a, std::size_t i) { return (a[i / 64] >> (i % 64)) & 1; }

std::vector<Codeword> greedy_constant_weight(std::size_t length, std::size_t min_distance) {
  if (length == 0 || length % 2 || length > 32) throw InvalidArgument("greedy codes need even length <= 32");
  std::vector<std::uint64_t> chosen;
  const std::uint64_t end = std::uint64_t{1} << length;
  for (std::uint64_t v = (std::uint64_t{1} << (length / 2)) - 1; v < end; v = next_same_weight(v)) {
    bool ok = true;
    for (std::uint64_t c : chosen)
      if (static_cast<std::size_t>(std::popcount(v ^ c)) < min_distance) {
        ok = false;
        break;
      }
    if (ok) chosen.push_back(v);
  }
  std::vector<Codeword> out;
  out.reserve(chosen.size());
  for (auto v : chosen) out.push_back(Codeword{v});
  return out;
}

HalfWeightCode HalfWeightCode::build(std::size_t length) {
  if (length == 0 || length % 8) throw InvalidArgument("code length must be a positive multiple of 8");
  HalfWeightCode code;
  code.length_ = length;
  // Distances between half-weight vectors are even; > N/4 means >= N/4 + 1 rounded to even.
  const std::size_t quarter = length / 4;

  if (length <= kGreedyMaxLength) {
    code.construction_ = Construction::greedy;
    code.greedy_words_ = greedy_constant_weight(length, quarter + 1);
    code.size_ = BigInt(static_cast<unsigned long>(code.greedy_words_.size()));
    code.distance_bound_ = quarter + 2 - (quarter % 2);
    return code;
  }

  const std::size_t blocks = length / kInnerLength;
  double best_score = -1;
  for (std::size_t d_in : {std::size_t{6}, std::size_t{8}}) {
    const auto& inner = inner_code(d_in);
    const unsigned long p = largest_prime_at_most(static_cast<unsigned long>(inner.size()));
    if (p < 2 || blocks > p) continue;
    // Largest k with (blocks - k + 1) d_in > N/4.
    std::size_t k = 0;
    for (std::size_t cand = 1; cand <= blocks; ++cand)
      if ((blocks - cand + 1) * d_in > quarter) k = cand;
    if (k == 0) continue;
    const double score = static_cast<double>(k) * std::log(static_cast<double>(p));
    if (score > best_score) {
      best_score = score;
      code.field_ = p;
      code.outer_dimension_ = k;
      code.inner_distance_ = d_in;
    }
  }
  if (best_score < 0) throw ResourceCap("no concatenated code of length " + std::to_string(length));
  code.construction_ = Construction::concatenated;
  code.outer_length_ = blocks;
  const auto& inner = inner_code(code.inner_distance_);
  code.inner_.reserve(code.field_);
  for (unsigned long s = 0; s < code.field_; ++s) code.inner_.push_back(static_cast<std::uint16_t>(inner[s][0]));
  mpz_ui_pow_ui(code.size_.get_mpz_t(), code.field_, code.outer_dimension_);
  code.distance_bound_ = (blocks - code.outer_dimension_ + 1) * code.inner_distance_;
  return code;
}

const HalfWeightCode& HalfWeightCode::shared(std::size_t length) {
  static std::mutex guard;
  static std::map<std::size_t, HalfWeightCode> codes;
  std::lock_guard lock(guard);
  auto it = codes.find(length);
  if (it == codes.end()) it = codes.emplace(length, build(length)).first;
  return it->second;
}

Codeword HalfWeightCode::codeword(const BigInt& index) const {
  if (index < 0 || index >= size_) throw InvalidArgument("codeword index out of range");
  if (construction_ == Construction::greedy) return greedy_words_[index.get_ui()];

  // Message digits in base p, then Reed-Solomon evaluation at 0..t-1.
  std::vector<unsigned long> message(outer_dimension_);
  BigInt rest = index;
  for (auto& digit : message) {
    digit = mpz_fdiv_ui(rest.get_mpz_t(), field_);
    rest /= static_cast<unsigned long>(field_);
  }
  Codeword out(words(), 0);
  auto place = [&](std::size_t offset, std::uint64_t bits, std::size_t width) {
    for (std::size_t b = 0; b < width; ++b)
      if ((bits >> b) & 1) out[(offset + b) / 64] |= std::uint64_t{1} << ((offset + b) % 64);
  };
  for (std::size_t x = 0; x < outer_length_; ++x) {
    unsigned long value = 0, power = 1;
    for (unsigned long coefficient : message) {
      value = (value + coefficient * power) % field_;
      power = (power * x) % field_;
    }
    place(x * kInnerLength, inner_[value], kInnerLength);
  }
  if (length_ % kInnerLength) place(outer_length_ * kInnerLength, 0x0F, 8);
  return out;
}

CodeCounts code_counts(std::size_t length) {
  if (length == 0 || length % 8) throw InvalidArgument("code length must be a positive multiple of 8");
  CodeCounts c;
  c.length = length;
  const unsigned long n = static_cast<unsigned long>(length);
  c.half_weight = binomial(n, n / 2);
  BigInt lhs = c.half_weight * c.half_weight * BigInt(2 * n);
  BigInt rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), 2, 2 * n);
  c.stirling = lhs >= rhs;
  c.ball = 0;
  for (unsigned long k = 0; k <= n / 8; ++k) {
    BigInt b = binomial(n / 2, k);
    c.ball += b * b;
  }
  c.log_ball = log_of(c.ball);
  c.log_ball_bound = static_cast<double>(n) * std::numbers::ln2 - std::numbers::pi * static_cast<double>(n) / 64.0;
  c.bernstein = c.log_ball <= c.log_ball_bound;
  return c;
}

}  // namespace emergence
