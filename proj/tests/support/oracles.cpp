#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oracle {

Rational base_distance(const SymbolicSystem& system, const Word& a, const Word& b) {
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t j = 0; j < common; ++j)
    if (a[j] != b[j]) {
      Rational out = 1;
      for (std::size_t k = 0; k < j; ++k) out *= system.lambda();
      return out;
    }
  if (a.size() != b.size()) throw std::logic_error("oracle needs a mismatch or equal words");
  return 0;
}

Rational bowen_distance(const SymbolicSystem& system, const Word& a, const Word& b, int n) {
  if (n <= 0) return base_distance(system, a, b);
  Rational best = 0;
  for (int i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(i) >= a.size()) break;
    Word sa(a.begin() + i, a.end()), sb(b.begin() + i, b.end());
    if (sa == sb) break;  // later shifts agree as well
    best = std::max(best, base_distance(system, sa, sb));
  }
  return best;
}

Rational transport_vertices(const std::vector<Rational>& supply, const std::vector<Rational>& demand,
                            const std::vector<Rational>& cost) {
  const std::size_t r = supply.size(), c = demand.size(), edges = r * c, basis = r + c - 1;
  std::optional<Rational> best;
  std::vector<bool> pick(edges, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(basis), true);
  do {
    // Acyclic check with union-find; r + c - 1 acyclic edges form a spanning tree.
    std::vector<std::size_t> parent(r + c);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    bool tree = true;
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (std::size_t e = 0; e < edges && tree; ++e) {
      if (!pick[e]) continue;
      std::size_t u = find(e / c), v = find(r + e % c);
      if (u == v) tree = false;
      parent[u] = v;
      chosen.emplace_back(e / c, e % c);
    }
    if (!tree) continue;
    // Leaf peeling.
    std::vector<Rational> left_s = supply, left_d = demand;
    std::vector<Rational> flow(chosen.size());
    std::vector<bool> used(chosen.size(), false);
    bool feasible = true;
    for (std::size_t step = 0; step < chosen.size() && feasible; ++step) {
      std::vector<int> degree(r + c, 0);
      for (std::size_t k = 0; k < chosen.size(); ++k)
        if (!used[k]) {
          ++degree[chosen[k].first];
          ++degree[r + chosen[k].second];
        }
      std::size_t k = 0;
      bool from_row = false;
      for (; k < chosen.size(); ++k) {
        if (used[k]) continue;
        if (degree[chosen[k].first] == 1) {
          from_row = true;
          break;
        }
        if (degree[r + chosen[k].second] == 1) break;
      }
      auto [i, j] = chosen[k];
      flow[k] = from_row ? left_s[i] : left_d[j];
      left_s[i] -= flow[k];
      left_d[j] -= flow[k];
      used[k] = true;
      if (flow[k] < 0) feasible = false;
    }
    if (!feasible) continue;
    Rational total = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) total += flow[k] * cost[chosen[k].first * c + chosen[k].second];
    if (!best || total < *best) best = total;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  if (!best) throw std::logic_error("no feasible basis");
  return *best;
}

Rational transport_permutations(std::size_t size, const std::vector<Rational>& cost) {
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Rational> best;
  do {
    Rational total = 0;
    for (std::size_t i = 0; i < size; ++i) total += cost[i * size + perm[i]];
    if (!best || total < *best) best = total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best / static_cast<long>(size);
}

Rational wasserstein_power(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p, int n) {
  const SymbolicSystem& sys = *mu.system();
  std::vector<Rational> supply, demand, cost;
  for (const auto& a : mu.atoms()) supply.push_back(a.weight);
  for (const auto& b : nu.atoms()) demand.push_back(b.weight);
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) {
      Rational d = bowen_distance(sys, a.word, b.word, n), v = 1;
      for (int k = 0; k < p; ++k) v *= d;
      cost.push_back(v);
    }
  return transport_vertices(supply, demand, cost);
}

Rational levy_prokhorov(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int n) {
  const SymbolicSystem& sys = *mu.system();
  std::vector<Word> points;
  for (const auto& a : mu.atoms()) points.push_back(a.word);
  for (const auto& a : nu.atoms()) points.push_back(a.word);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t k = points.size();
  std::vector<Rational> wm(k, 0), wn(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto& a : mu.atoms())
      if (a.word == points[i]) wm[i] = a.weight;
    for (const auto& a : nu.atoms())
      if (a.word == points[i]) wn[i] = a.weight;
  }
  std::vector<Rational> dist(k * k);
  std::vector<Rational> levels{0};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      dist[i * k + j] = bowen_distance(sys, points[i], points[j], n);
      levels.push_back(dist[i * k + j]);
    }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::optional<Rational> best;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const Rational& t = levels[li];
    // Open eps-neighbourhoods for eps in (t, next] are the closed t-neighbourhoods.
    Rational g = 0;
    for (std::uint64_t set = 1; set < (std::uint64_t{1} << k); ++set) {
      Rational in_mu = 0, in_nu = 0, near_mu = 0, near_nu = 0;
      for (std::size_t q = 0; q < k; ++q) {
        if (set >> q & 1) {
          in_mu += wm[q];
          in_nu += wn[q];
        }
        bool near = false;
        for (std::size_t p = 0; p < k && !near; ++p)
          if ((set >> p & 1) && dist[p * k + q] <= t) near = true;
        if (near) {
          near_mu += wm[q];
          near_nu += wn[q];
        }
      }
      g = std::max({g, Rational(in_mu - near_nu), Rational(in_nu - near_mu)});
    }
    Rational candidate = std::max(t, g);
    const bool inside = li + 1 == levels.size() || candidate <= levels[li + 1];
    if (inside && (!best || candidate < *best)) best = candidate;
  }
  return *best;
}

Rational hausdorff(const FiniteClosedSet& b, const FiniteClosedSet& c, int n) {
  const SymbolicSystem& sys = *b.system();
  auto directed = [&](const FiniteClosedSet& x, const FiniteClosedSet& y) {
    Rational worst = 0;
    for (const auto& p : x.points()) {
      std::optional<Rational> nearest;
      for (const auto& q : y.points()) {
        Rational d = bowen_distance(sys, p, q, n);
        if (!nearest || d < *nearest) nearest = d;
      }
      worst = std::max(worst, *nearest);
    }
    return worst;
  };
  return std::max(directed(b, c), directed(c, b));
}

std::uint64_t count_words_brute(const SymbolicSystem& system, int length) {
  if (length <= 0) return 1;
  const int m = system.alphabet_size();
  std::uint64_t total = 0, strings = 1;
  for (int i = 0; i < length; ++i) strings *= static_cast<std::uint64_t>(m);
  for (std::uint64_t code = 0; code < strings; ++code) {
    std::uint64_t rest = code;
    int prev = -1;
    bool ok = true;
    for (int i = 0; i < length && ok; ++i) {
      const int s = static_cast<int>(rest % static_cast<std::uint64_t>(m));
      rest /= static_cast<std::uint64_t>(m);
      if (prev >= 0 && !system.transitions()[prev][s]) ok = false;
      prev = s;
    }
    if (ok) ++total;
  }
  return total;
}

BigInt pascal(unsigned n, unsigned k) {
  std::vector<BigInt> row(n + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i; j >= 1; --j) row[j] += row[j - 1];
  return row[k];
}

std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t count, int max_units) {
  std::vector<Rational> units;
  Rational total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    units.emplace_back(static_cast<long>(1 + rng() % static_cast<unsigned>(max_units)));
    total += units.back();
  }
  for (auto& u : units) {
    u /= total;
    u.canonicalize();
  }
  return units;
}

}  // namespace oracle
