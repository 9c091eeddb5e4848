#include "emergence/hyperspace.hpp"

#include <algorithm>

#include "emergence/kernels.hpp"

namespace emergence {

namespace {

// Largest exponent-or-zero of d_n(w, c) over c in C, using the batched
// first-mismatch kernel. Returns the nearest distance as a PowerDistance.
PowerDistance nearest(std::span<const Symbol> w, const FiniteClosedSet& c, int n,
                      std::vector<std::uint32_t>& scratch) {
  const std::size_t len = c.resolution();
  scratch.resize(c.size());
  kernels::first_mismatch_many(w.data(), c.packed().data(), c.size(), len, scratch.data());
  const std::uint32_t lcp = *std::max_element(scratch.begin(), scratch.end());
  if (lcp == len) return {true, 0, true};
  int e = static_cast<int>(lcp) - n + 1;
  return {false, e > 0 ? e : 0, true};
}

void require_compatible(const FiniteClosedSet& b, const FiniteClosedSet& c) {
  require_same_system(b.system(), c.system());
  if (b.resolution() != c.resolution())
    throw InexactDistance("sets at resolutions " + std::to_string(b.resolution()) + " and " +
                          std::to_string(c.resolution()) + " are not comparable");
}

}  // namespace

FiniteClosedSet::FiniteClosedSet(SystemHandle system, std::vector<Word> points)
    : system_(std::move(system)), points_(std::move(points)) {
  if (!system_) throw InvalidArgument("missing system handle");
  if (points_.empty()) throw InvalidArgument("closed set must be nonempty");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  const std::size_t len = points_.front().size();
  if (len == 0) throw InvalidArgument("point words must be nonempty");
  packed_.reserve(len * points_.size());
  for (const auto& p : points_) {
    if (p.size() != len) throw InvalidArgument("closed set points must share one resolution");
    system_->validate(p);
    packed_.insert(packed_.end(), p.begin(), p.end());
  }
}

bool FiniteClosedSet::contains(const Word& w) const {
  return std::binary_search(points_.begin(), points_.end(), w);
}

PowerDistance hausdorff_power(const FiniteClosedSet& b, const FiniteClosedSet& c, int n) {
  require_compatible(b, c);
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  std::vector<std::uint32_t> scratch;
  PowerDistance worst{true, 0, true};
  auto farther = [](const PowerDistance& x, const PowerDistance& y) {
    if (x.zero || y.zero) return !x.zero && y.zero;
    return x.exponent < y.exponent;
  };
  for (const auto* pair : {&b, &c}) {
    const FiniteClosedSet& from = *pair;
    const FiniteClosedSet& to = pair == &b ? c : b;
    for (const auto& w : from.points()) {
      PowerDistance d = nearest(w, to, n, scratch);
      if (farther(d, worst)) worst = d;
      if (!worst.zero && worst.exponent == 0) return worst;
    }
  }
  return worst;
}

Rational hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c, std::optional<BowenContext> ctx) {
  BowenContext context = ctx.value_or(BowenContext{});
  if (context.mode == MetricMode::bowen) return hausdorff_power(b, c, context.n).value(*b.system());
  require_compatible(b, c);
  const SymbolicSystem& sys = *b.system();
  Rational worst = 0;
  for (const auto* pair : {&b, &c}) {
    const FiniteClosedSet& from = *pair;
    const FiniteClosedSet& to = pair == &b ? c : b;
    for (const auto& w : from.points()) {
      Rational best = -1;
      for (const auto& v : to.points()) {
        Rational d = word_distance(sys, w, v, context).value;
        if (best < 0 || d < best) best = d;
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

Rational bowen_orbit_hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c, int n) {
  require_compatible(b, c);
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  if (b.resolution() < static_cast<std::size_t>(n))
    throw InvalidArgument("resolution too small for " + std::to_string(n) + " iterates");
  Rational best = 0;
  FiniteClosedSet x = b, y = c;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      x = image_set(x);
      y = image_set(y);
    }
    best = std::max(best, hausdorff(x, y));
  }
  return best;
}

Rational set_diameter(const FiniteClosedSet& b, std::optional<BowenContext> ctx) {
  BowenContext context = ctx.value_or(BowenContext{});
  const SymbolicSystem& sys = *b.system();
  Rational worst = 0;
  const auto& pts = b.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      worst = std::max(worst, word_distance(sys, pts[i], pts[j], context).value);
  return worst;
}

FiniteClosedSet image_set(const FiniteClosedSet& b) {
  std::vector<Word> out;
  out.reserve(b.size());
  for (const auto& p : b.points()) out.push_back(shift_word(p));
  return FiniteClosedSet(b.system(), std::move(out));
}

FiniteClosedSet truncate(const FiniteClosedSet& b, std::size_t resolution) {
  if (resolution == 0 || resolution > b.resolution())
    throw InvalidArgument("cannot truncate to resolution " + std::to_string(resolution));
  std::vector<Word> out;
  for (const auto& p : b.points()) out.emplace_back(p.begin(), p.begin() + resolution);
  return FiniteClosedSet(b.system(), std::move(out));
}

FiniteClosedSet set_union(const FiniteClosedSet& b, const FiniteClosedSet& c) {
  require_compatible(b, c);
  std::vector<Word> out = b.points();
  out.insert(out.end(), c.points().begin(), c.points().end());
  return FiniteClosedSet(b.system(), std::move(out));
}

FiniteClosedSet periodic_fixed_set(SystemHandle system, const std::vector<Word>& cycles,
                                   int resolution) {
  if (cycles.empty()) throw InvalidArgument("need at least one cyclic word");
  std::vector<Word> out;
  for (const auto& cycle : cycles) {
    if (!system->cyclically_admissible(cycle))
      throw InvalidArgument("word " + word_to_string(cycle) + " is not cyclically admissible");
    for (std::size_t r = 0; r < cycle.size(); ++r)
      out.push_back(periodic_extension(rotate(cycle, r), resolution));
  }
  return FiniteClosedSet(std::move(system), std::move(out));
}

bool is_fixed(const FiniteClosedSet& b) {
  if (b.resolution() < 2) return false;
  return image_set(b) == truncate(b, b.resolution() - 1);
}

}  // namespace emergence
