#include "emergence/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace emergence {

namespace {

void require_same(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_system(mu.system(), nu.system());
}

// Ground cost d^p for every atom pair, row-major.
std::vector<Rational> ground_costs(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p,
                                   const BowenContext& ctx, const TransportOptions& options,
                                   bool& exact) {
  const SymbolicSystem& sys = *mu.system();
  std::vector<Rational> cost;
  cost.reserve(mu.size() * nu.size());
  exact = true;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) {
      Distance d;
      if (ctx.mode == MetricMode::bowen) {
        PowerDistance pd = bowen_power(a.word, b.word, ctx.n);
        d.exact = pd.exact;
        d.value = pd.zero ? Rational(0) : sys.lambda_pow(pd.exponent * p);
        if (!d.exact && !options.allow_inexact)
          throw InexactDistance("atoms " + word_to_string(a.word) + " and " + word_to_string(b.word) +
                                " agree on their overlap; distance is not determined");
        exact = exact && d.exact;
        cost.push_back(std::move(d.value));
        continue;
      }
      d = word_distance(sys, a.word, b.word, ctx);
      if (!d.exact && !options.allow_inexact)
        throw InexactDistance("atoms " + word_to_string(a.word) + " and " + word_to_string(b.word) +
                              " are not resolved at horizon " + std::to_string(ctx.n));
      exact = exact && d.exact;
      cost.push_back(pow(d.value, static_cast<unsigned>(p)));
    }
  return cost;
}

std::vector<Rational> weights_of(const DiscreteMeasure& mu) {
  std::vector<Rational> w;
  w.reserve(mu.size());
  for (const auto& a : mu.atoms()) w.push_back(a.weight);
  return w;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(SystemHandle system, std::vector<Atom> atoms)
    : system_(std::move(system)) {
  if (!system_) throw InvalidArgument("missing system handle");
  std::map<Word, Rational> merged;
  Rational total = 0;
  for (auto& a : atoms) {
    if (a.weight < 0) throw InvalidArgument("negative atom weight");
    if (a.word.empty()) throw InvalidArgument("atom word must be nonempty");
    system_->validate(a.word);
    total += a.weight;
    if (a.weight == 0) continue;
    merged[std::move(a.word)] += a.weight;
  }
  if (total != 1) throw InvalidArgument("atom weights sum to " + to_string(total) + ", not 1");
  atoms_.reserve(merged.size());
  for (auto& [w, weight] : merged) atoms_.push_back({w, weight});
}

DiscreteMeasure DiscreteMeasure::dirac(const CylinderPoint& x) { return dirac(x.system(), x.word()); }

DiscreteMeasure DiscreteMeasure::dirac(SystemHandle system, Word word) {
  return DiscreteMeasure(std::move(system), {{std::move(word), Rational(1)}});
}

DiscreteMeasure DiscreteMeasure::uniform(SystemHandle system, const std::vector<Word>& words) {
  if (words.empty()) throw InvalidArgument("uniform measure needs at least one word");
  Rational w(1, static_cast<unsigned long>(words.size()));
  std::vector<Atom> atoms;
  atoms.reserve(words.size());
  for (const auto& word : words) atoms.push_back({word, w});
  return DiscreteMeasure(std::move(system), std::move(atoms));
}

std::size_t DiscreteMeasure::min_length() const {
  std::size_t l = atoms_.front().word.size();
  for (const auto& a : atoms_) l = std::min(l, a.word.size());
  return l;
}

std::size_t DiscreteMeasure::max_length() const {
  std::size_t l = 0;
  for (const auto& a : atoms_) l = std::max(l, a.word.size());
  return l;
}

bool DiscreteMeasure::operator<(const DiscreteMeasure& other) const {
  return std::lexicographical_compare(
      atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(),
      [](const Atom& a, const Atom& b) { return a.word != b.word ? a.word < b.word : a.weight < b.weight; });
}

double WassersteinResult::value() const {
  double c = to_double(power_cost);
  return p == 1 ? c : std::pow(c, 1.0 / p);
}

std::optional<Rational> WassersteinResult::exact_value() const {
  if (p == 1 || power_cost == 0) return power_cost;
  return std::nullopt;
}

WassersteinResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p,
                              std::optional<BowenContext> ctx, TransportOptions options) {
  require_same(mu, nu);
  if (p < 1 || p > 3) throw InvalidArgument("p must be 1, 2 or 3");
  WassersteinResult result;
  result.p = p;
  auto cost = ground_costs(mu, nu, p, ctx.value_or(BowenContext{}), options, result.exact);
  auto supply = weights_of(mu), demand = weights_of(nu);
  if (p != 1 || !result.exact) {
    auto flow = transport::solve(supply, demand, cost);
    result.power_cost = std::move(flow.cost);
    result.plan.entries = std::move(flow.plan);
    return result;
  }

  // W_1: mass shared by identical atoms stays in place; only the residual is transported.
  const auto& a = mu.atoms();
  const auto& b = nu.atoms();
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i].word < b[j].word) {
      ++i;
    } else if (b[j].word < a[i].word) {
      ++j;
    } else {
      Rational shared = std::min(supply[i], demand[j]);
      result.plan.entries.push_back({i, j, shared});
      supply[i] -= shared;
      demand[j] -= shared;
      ++i;
      ++j;
    }
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < supply.size(); ++i)
    if (supply[i] > 0) rows.push_back(i);
  for (std::size_t j = 0; j < demand.size(); ++j)
    if (demand[j] > 0) cols.push_back(j);
  if (rows.empty()) return result;
  std::vector<Rational> sub_supply, sub_demand, sub_cost;
  for (auto i : rows) sub_supply.push_back(supply[i]);
  for (auto j : cols) sub_demand.push_back(demand[j]);
  for (auto i : rows)
    for (auto j : cols) sub_cost.push_back(cost[i * b.size() + j]);
  auto flow = transport::solve(sub_supply, sub_demand, sub_cost);
  result.power_cost = std::move(flow.cost);
  for (auto& e : flow.plan) result.plan.entries.push_back({rows[e.source], cols[e.target], e.mass});
  std::sort(result.plan.entries.begin(), result.plan.entries.end(),
            [](const auto& x, const auto& y) { return std::tie(x.source, x.target) < std::tie(y.source, y.target); });
  return result;
}

Rational levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        std::optional<BowenContext> ctx, TransportOptions options) {
  require_same(mu, nu);
  bool exact = true;
  auto dist = ground_costs(mu, nu, 1, ctx.value_or(BowenContext{}), options, exact);
  std::vector<Rational> thresholds;
  for (const auto& d : dist)
    if (d > 0) thresholds.push_back(d);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  auto supply = weights_of(mu), demand = weights_of(nu);
  // g(eps) = least coupling mass on {d > eps}; constant on [t_i, t_{i+1}).
  auto excess = [&](const Rational& level) {
    std::vector<Rational> indicator;
    indicator.reserve(dist.size());
    for (const auto& d : dist) indicator.push_back(d > level ? Rational(1) : Rational(0));
    return transport::solve(supply, demand, indicator).cost;
  };

  std::optional<Rational> best;
  Rational start = 0;
  for (std::size_t i = 0; i <= thresholds.size(); ++i) {
    Rational g = excess(start);
    Rational candidate = std::max(start, g);
    bool inside = i == thresholds.size() || candidate < thresholds[i];
    if (inside && (!best || candidate < *best)) best = candidate;
    if (g == 0) break;  // later intervals only start higher
    if (i < thresholds.size()) start = thresholds[i];
  }
  return *best;
}

Rational bowen_orbit_wasserstein_power(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p,
                                       int n) {
  require_same(mu, nu);
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  Rational best = 0;
  DiscreteMeasure a = mu, b = nu;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      a = pushforward(a);
      b = pushforward(b);
    }
    best = std::max(best, wasserstein(a, b, p).power_cost);
  }
  return best;
}

Rational bowen_orbit_levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n) {
  require_same(mu, nu);
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  Rational best = 0;
  DiscreteMeasure a = mu, b = nu;
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      a = pushforward(a);
      b = pushforward(b);
    }
    best = std::max(best, levy_prokhorov(a, b));
  }
  return best;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) atoms.push_back({shift_word(a.word), a.weight});
  return DiscreteMeasure(mu.system(), std::move(atoms));
}

DiscreteMeasure pushforward_iterate(const DiscreteMeasure& mu, int times) {
  DiscreteMeasure out = mu;
  for (int i = 0; i < times; ++i) out = pushforward(out);
  return out;
}

DiscreteMeasure empirical_measure(const CylinderPoint& x, int n) {
  if (n < 1) throw InvalidArgument("empirical measure needs n >= 1");
  const Word& w = x.word();
  if (w.size() < static_cast<std::size_t>(n))
    throw InvalidArgument("word of length " + std::to_string(w.size()) + " is too short for " +
                          std::to_string(n) + " shifts");
  const std::size_t keep = w.size() - static_cast<std::size_t>(n) + 1;
  std::vector<Atom> atoms;
  Rational weight(1, static_cast<unsigned long>(n));
  for (int i = 0; i < n; ++i) atoms.push_back({Word(w.begin() + i, w.begin() + i + keep), weight});
  return DiscreteMeasure(x.system(), std::move(atoms));
}

DiscreteMeasure periodic_orbit_measure(SystemHandle system, const Word& cycle, int resolution) {
  if (!system->cyclically_admissible(cycle))
    throw InvalidArgument("word " + word_to_string(cycle) + " is not cyclically admissible");
  if (resolution < 1) throw InvalidArgument("resolution must be >= 1");
  std::vector<Atom> atoms;
  Rational weight(1, static_cast<unsigned long>(cycle.size()));
  for (std::size_t r = 0; r < cycle.size(); ++r)
    atoms.push_back({periodic_extension(rotate(cycle, r), resolution), weight});
  return DiscreteMeasure(std::move(system), std::move(atoms));
}

Rational ultrametric_w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n) {
  require_same(mu, nu);
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  const std::size_t length = mu.atoms().front().word.size();
  for (const auto* m : {&mu, &nu})
    for (const auto& a : m->atoms())
      if (a.word.size() != length) throw InexactDistance("tree formula needs equal-length atoms");

  // Signed masses in merged lexicographic order.
  std::vector<std::pair<const Word*, Rational>> signed_atoms;
  for (const auto& a : mu.atoms()) signed_atoms.push_back({&a.word, a.weight});
  for (const auto& a : nu.atoms()) signed_atoms.push_back({&a.word, -a.weight});
  std::stable_sort(signed_atoms.begin(), signed_atoms.end(),
                   [](const auto& x, const auto& y) { return *x.first < *y.first; });

  const SymbolicSystem& sys = *mu.system();
  auto level = [&](std::size_t j) -> Rational {
    if (j >= length) return 0;
    int e = static_cast<int>(j) - n + 1;
    return sys.lambda_pow(e > 0 ? e : 0);
  };

  Rational total = 0;
  for (std::size_t k = 1; k <= length; ++k) {
    Rational edge = (level(k - 1) - level(k)) / 2;
    if (edge == 0) continue;
    Rational imbalance = 0;
    for (std::size_t i = 0; i < signed_atoms.size();) {
      Rational mass = 0;
      std::size_t j = i;
      while (j < signed_atoms.size() &&
             std::equal(signed_atoms[i].first->begin(), signed_atoms[i].first->begin() + k,
                        signed_atoms[j].first->begin())) {
        mass += signed_atoms[j].second;
        ++j;
      }
      imbalance += abs(mass);
      i = j;
    }
    total += edge * imbalance;
  }
  return total;
}

DiscreteMeasure random_measure(SystemHandle system, std::mt19937_64& rng, int max_support,
                               int length) {
  const std::size_t support = 1 + draw_below(rng, static_cast<std::uint64_t>(max_support));
  std::vector<std::uint64_t> raw(support);
  std::vector<Word> words(support);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < support; ++i) {
    words[i] = random_word(*system, length, rng);
    raw[i] = 1 + draw_below(rng, 8);
    total += raw[i];
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < support; ++i) {
    Rational w(static_cast<unsigned long>(raw[i]), static_cast<unsigned long>(total));
    w.canonicalize();
    atoms.push_back({words[i], std::move(w)});
  }
  return DiscreteMeasure(std::move(system), std::move(atoms));
}

}  // namespace emergence
