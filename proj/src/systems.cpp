#include "emergence/systems.hpp"

#include <algorithm>
#include <limits>

#include "emergence/kernels.hpp"

namespace emergence {

namespace {

constexpr int kMaxAlphabet = 36;
constexpr int kPowerCache = 160;

void check_lambda(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) throw InvalidArgument("lambda must lie in (0, 1)");
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

}  // namespace

Word word_from_string(std::string_view digits) {
  Word w;
  w.reserve(digits.size());
  for (char c : digits) {
    if (c >= '0' && c <= '9')
      w.push_back(static_cast<Symbol>(c - '0'));
    else if (c >= 'a' && c <= 'z')
      w.push_back(static_cast<Symbol>(10 + c - 'a'));
    else
      throw InvalidArgument(std::string("illegal symbol '") + c + "' in word");
  }
  return w;
}

std::string word_to_string(std::span<const Symbol> word) {
  std::string s;
  s.reserve(word.size());
  for (Symbol c : word) s.push_back(c < 10 ? static_cast<char>('0' + c) : static_cast<char>('a' + c - 10));
  return s;
}

SymbolicSystem::SymbolicSystem(int m, std::vector<std::uint8_t> allowed, bool full, Rational lambda)
    : m_(m), allowed_(std::move(allowed)), full_(full), lambda_(std::move(lambda)) {
  powers_.reserve(kPowerCache);
  Rational p = 1;
  for (int e = 0; e < kPowerCache; ++e) {
    powers_.push_back(p);
    p *= lambda_;
  }
}

SymbolicSystem SymbolicSystem::full_shift(int m, Rational lambda) {
  if (m < 1 || m > kMaxAlphabet) throw InvalidArgument("alphabet size out of range");
  check_lambda(lambda);
  return SymbolicSystem(m, std::vector<std::uint8_t>(static_cast<std::size_t>(m * m), 1), true,
                        std::move(lambda));
}

SymbolicSystem SymbolicSystem::subshift(std::vector<std::vector<bool>> transitions, Rational lambda) {
  const int m = static_cast<int>(transitions.size());
  if (m < 2 || m > kMaxAlphabet) throw InvalidArgument("transition matrix must be m x m with m >= 2");
  check_lambda(lambda);
  std::vector<std::uint8_t> allowed(static_cast<std::size_t>(m * m), 0);
  bool full = true;
  for (int a = 0; a < m; ++a) {
    if (static_cast<int>(transitions[a].size()) != m)
      throw InvalidArgument("transition matrix is not square");
    for (int b = 0; b < m; ++b) {
      allowed[a * m + b] = transitions[a][b] ? 1 : 0;
      full = full && transitions[a][b];
    }
  }
  for (int a = 0; a < m; ++a) {
    bool row = false, col = false;
    for (int b = 0; b < m; ++b) {
      row = row || allowed[a * m + b];
      col = col || allowed[b * m + a];
    }
    if (!row || !col) throw InvalidArgument("symbol " + std::to_string(a) + " is dead");
  }
  return SymbolicSystem(m, std::move(allowed), full, std::move(lambda));
}

std::vector<std::vector<bool>> SymbolicSystem::transitions() const {
  std::vector<std::vector<bool>> t(m_, std::vector<bool>(m_));
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b) t[a][b] = allowed_[a * m_ + b] != 0;
  return t;
}

bool SymbolicSystem::admissible(std::span<const Symbol> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= m_) return false;
    if (i > 0 && !allowed(word[i - 1], word[i])) return false;
  }
  return true;
}

bool SymbolicSystem::cyclically_admissible(std::span<const Symbol> word) const {
  return !word.empty() && admissible(word) && allowed(word.back(), word.front());
}

void SymbolicSystem::validate(std::span<const Symbol> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= m_)
      throw InvalidArgument("symbol " + std::to_string(word[i]) + " outside alphabet of size " +
                            std::to_string(m_));
    if (i > 0 && !allowed(word[i - 1], word[i]))
      throw InvalidArgument("forbidden transition in word " + word_to_string(word));
  }
}

Rational SymbolicSystem::lambda_pow(int exponent) const {
  if (exponent < 0) throw InvalidArgument("negative exponent");
  if (exponent < kPowerCache) return powers_[exponent];
  return pow(lambda_, static_cast<unsigned>(exponent));
}

Rational SymbolicSystem::diameter() const { return m_ >= 2 ? Rational(1) : Rational(0); }

std::uint64_t SymbolicSystem::count_words(int length) const {
  if (length <= 0) return 1;
  std::vector<std::uint64_t> ending(m_, 1), next(m_);
  for (int step = 1; step < length; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b)
        if (allowed(a, b)) next[b] = saturating_add(next[b], ending[a]);
    ending.swap(next);
  }
  std::uint64_t total = 0;
  for (auto c : ending) total = saturating_add(total, c);
  return total;
}

std::optional<int> SymbolicSystem::primitivity_exponent() const {
  const int bound = (m_ - 1) * (m_ - 1) + 1;
  std::vector<std::uint8_t> power = allowed_, next(allowed_.size());
  for (int k = 1; k <= bound; ++k) {
    if (std::all_of(power.begin(), power.end(), [](std::uint8_t v) { return v != 0; })) return k;
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) {
        std::uint8_t v = 0;
        for (int c = 0; c < m_ && !v; ++c) v = power[a * m_ + c] && allowed_[c * m_ + b];
        next[a * m_ + b] = v;
      }
    power.swap(next);
  }
  return std::nullopt;
}

std::optional<Word> SymbolicSystem::connector(Symbol from, Symbol to, int steps) const {
  if (steps < 1) throw InvalidArgument("connector needs at least one step");
  // reach[t][x]: `to` is reachable from x in exactly t steps.
  std::vector<std::vector<std::uint8_t>> reach(steps + 1, std::vector<std::uint8_t>(m_, 0));
  reach[0][to] = 1;
  for (int t = 1; t <= steps; ++t)
    for (int x = 0; x < m_; ++x)
      for (int y = 0; y < m_ && !reach[t][x]; ++y) reach[t][x] = allowed(x, y) && reach[t - 1][y];
  if (!reach[steps][from]) return std::nullopt;
  Word path;
  Symbol cur = from;
  for (int t = steps - 1; t >= 1; --t) {
    for (int y = 0; y < m_; ++y)
      if (allowed(cur, y) && reach[t][y]) {
        cur = static_cast<Symbol>(y);
        break;
      }
    path.push_back(cur);
  }
  return path;
}

int SymbolicSystem::open_exponent(const Rational& eps) const {
  if (eps <= 0) throw InvalidArgument("scale must be positive");
  int e = 0;
  while (!(lambda_pow(e) < eps)) ++e;
  return e;
}

int SymbolicSystem::closed_exponent(const Rational& eps) const {
  if (eps <= 0) throw InvalidArgument("scale must be positive");
  int e = 0;
  while (!(lambda_pow(e) <= eps)) ++e;
  return e;
}

void require_same_system(const SystemHandle& a, const SystemHandle& b) {
  if (!a || !b) throw InvalidArgument("missing system handle");
  if (a.get() != b.get() && !(*a == *b)) throw SystemMismatch("objects belong to different systems");
}

CylinderPoint::CylinderPoint(SystemHandle system, Word word)
    : system_(std::move(system)), word_(std::move(word)) {
  if (!system_) throw InvalidArgument("missing system handle");
  if (word_.empty()) throw InvalidArgument("cylinder word must be nonempty");
  system_->validate(word_);
}

PowerDistance bowen_power(std::span<const Symbol> a, std::span<const Symbol> b, int n) {
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  const std::size_t overlap = std::min(a.size(), b.size());
  const std::size_t j = kernels::first_mismatch(a.data(), b.data(), overlap);
  if (j < overlap) {
    int e = static_cast<int>(j) - n + 1;
    return {false, e > 0 ? e : 0, true};
  }
  return {true, 0, a.size() == b.size()};
}

Distance word_distance(const SymbolicSystem& system, std::span<const Symbol> a,
                       std::span<const Symbol> b, const BowenContext& ctx) {
  if (ctx.mode == MetricMode::bowen) {
    PowerDistance pd = bowen_power(a, b, ctx.n);
    return {pd.value(system), pd.exact};
  }
  if (ctx.n < 1) throw InvalidArgument("horizon must be >= 1");
  // Mean metric: term i is lambda^(j_i - i), j_i the first mismatch at or after i.
  const std::size_t overlap = std::min(a.size(), b.size());
  const bool same_length = a.size() == b.size();
  std::vector<std::size_t> mismatches;
  // Only mismatches up to the first one at or past index n - 1 are needed.
  for (std::size_t pos = 0; pos < overlap;) {
    std::size_t j = pos + kernels::first_mismatch(a.data() + pos, b.data() + pos, overlap - pos);
    if (j >= overlap) break;
    mismatches.push_back(j);
    if (j + 1 >= static_cast<std::size_t>(ctx.n)) break;
    pos = j + 1;
  }
  Rational sum = 0;
  bool exact = true;
  std::size_t next = 0;
  for (int i = 0; i < ctx.n; ++i) {
    while (next < mismatches.size() && mismatches[next] < static_cast<std::size_t>(i)) ++next;
    if (next < mismatches.size()) {
      sum += system.lambda_pow(static_cast<int>(mismatches[next]) - i);
    } else if (!same_length) {
      exact = false;
    }
  }
  sum /= ctx.n;
  return {sum, exact};
}

Distance base_distance(const CylinderPoint& x, const CylinderPoint& y) {
  require_same_system(x.system(), y.system());
  return word_distance(*x.system(), x.word(), y.word(), BowenContext{1, MetricMode::bowen});
}

Distance bowen_distance(const CylinderPoint& x, const CylinderPoint& y, const BowenContext& ctx) {
  require_same_system(x.system(), y.system());
  return word_distance(*x.system(), x.word(), y.word(), ctx);
}

Word shift_word(std::span<const Symbol> word) {
  if (word.size() < 2) throw InvalidArgument("cannot shift a word of length < 2");
  return Word(word.begin() + 1, word.end());
}

CylinderPoint shift(const CylinderPoint& x) { return CylinderPoint(x.system(), shift_word(x.word())); }

void for_each_cylinder(const SymbolicSystem& system, int length,
                       const std::function<void(const Word&)>& visit, std::uint64_t cap) {
  if (length < 1) throw InvalidArgument("cylinder length must be >= 1");
  if (system.count_words(length) > cap)
    throw ResourceCap("cylinder enumeration at length " + std::to_string(length) + " exceeds cap " +
                      std::to_string(cap));
  const int m = system.alphabet_size();
  Word w(static_cast<std::size_t>(length), 0);
  // Iterative DFS in lexicographic order; next[i] is the next symbol to try at depth i.
  std::vector<int> next(static_cast<std::size_t>(length), 0);
  int depth = 0;
  while (depth >= 0) {
    if (next[depth] >= m) {
      next[depth] = 0;
      --depth;
      continue;
    }
    Symbol s = static_cast<Symbol>(next[depth]++);
    if (depth > 0 && !system.allowed(w[depth - 1], s)) continue;
    w[depth] = s;
    if (depth + 1 == length)
      visit(w);
    else
      ++depth;
  }
}

std::vector<Word> enumerate_cylinders(const SymbolicSystem& system, int length, std::uint64_t cap) {
  std::vector<Word> out;
  if (length >= 1 && system.count_words(length) <= cap) out.reserve(system.count_words(length));
  for_each_cylinder(system, length, [&](const Word& w) { out.push_back(w); }, cap);
  return out;
}

Word periodic_extension(std::span<const Symbol> cycle, int length) {
  if (cycle.empty()) throw InvalidArgument("empty cycle");
  Word w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) w[i] = cycle[static_cast<std::size_t>(i) % cycle.size()];
  return w;
}

Word rotate(std::span<const Symbol> cycle, std::size_t r) {
  Word w(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) w[i] = cycle[(i + r) % cycle.size()];
  return w;
}

Word canonical_rotation(std::span<const Symbol> cycle) {
  Word best(cycle.begin(), cycle.end());
  for (std::size_t r = 1; r < cycle.size(); ++r) best = std::min(best, rotate(cycle, r));
  return best;
}

Word random_word(const SymbolicSystem& system, int length, std::mt19937_64& rng) {
  const int m = system.alphabet_size();
  Word w;
  w.reserve(static_cast<std::size_t>(length));
  std::vector<Symbol> options;
  for (int i = 0; i < length; ++i) {
    options.clear();
    for (int s = 0; s < m; ++s)
      if (i == 0 || system.allowed(w.back(), static_cast<Symbol>(s))) options.push_back(static_cast<Symbol>(s));
    w.push_back(options[draw_below(rng, options.size())]);
  }
  return w;
}

}  // namespace emergence
