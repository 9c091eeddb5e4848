#include "emergence/transport.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace emergence::transport {

namespace {

BigInt lcm_of_denominators(std::span<const Rational> values) {
  BigInt l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

BigInt scaled(const Rational& v, const BigInt& scale) {
  BigInt out = v.get_num() * (scale / v.get_den());
  return out;
}

template <class T>
T from_big(const BigInt& v) {
  if constexpr (std::is_same_v<T, BigInt>)
    return v;
  else
    return static_cast<T>(v.get_si());
}

template <class T>
BigInt to_big(const T& v) {
  if constexpr (std::is_same_v<T, BigInt>)
    return v;
  else
    return BigInt(static_cast<long>(v));
}

// Dense successive-shortest-path solver on the bipartite transport network.
// Node layout: rows [0, r), columns [r, r + c), source s = r + c, sink t = s + 1.
template <class T>
std::vector<T> ssp(const std::vector<T>& supply, const std::vector<T>& demand,
                   const std::vector<T>& cost) {
  const std::size_t r = supply.size(), c = demand.size();
  const std::size_t nodes = r + c + 2, s = r + c, t = s + 1;
  std::vector<T> flow(r * c, T(0)), out(r, T(0)), in(c, T(0));
  std::vector<T> pot(nodes, T(0)), dist(nodes, T(0));
  std::vector<std::size_t> parent(nodes);
  std::vector<char> done(nodes), reached(nodes);

  T remaining(0);
  for (const auto& a : supply) remaining += a;

  // Residual capacity and cost of the arc u -> v (capacity 0 means absent).
  auto arc = [&](std::size_t u, std::size_t v, T& cap, T& w) -> bool {
    if (u == s && v < r) {
      cap = supply[v] - out[v];
      w = T(0);
    } else if (u < r && v == s) {
      cap = out[u];
      w = T(0);
    } else if (u < r && v >= r && v < s) {
      cap = remaining;  // uncapacitated; never the bottleneck beyond the total
      w = cost[u * c + (v - r)];
    } else if (u >= r && u < s && v < r) {
      cap = flow[v * c + (u - r)];
      w = -cost[v * c + (u - r)];
    } else if (u >= r && u < s && v == t) {
      cap = demand[u - r] - in[u - r];
      w = T(0);
    } else if (u == t && v >= r && v < s) {
      cap = in[v - r];
      w = T(0);
    } else {
      return false;
    }
    return cap > 0;
  };

  while (remaining > 0) {
    std::fill(done.begin(), done.end(), 0);
    std::fill(reached.begin(), reached.end(), 0);
    dist[s] = T(0);
    reached[s] = 1;
    for (;;) {
      std::size_t u = nodes;
      for (std::size_t v = 0; v < nodes; ++v)
        if (reached[v] && !done[v] && (u == nodes || dist[v] < dist[u])) u = v;
      if (u == nodes) break;
      done[u] = 1;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (done[v]) continue;
        T cap, w;
        if (!arc(u, v, cap, w)) continue;
        T nd = dist[u] + w + pot[u] - pot[v];
        if (!reached[v] || nd < dist[v]) {
          dist[v] = nd;
          reached[v] = 1;
          parent[v] = u;
        }
      }
    }
    if (!reached[t]) throw Error("transport network is infeasible");
    for (std::size_t v = 0; v < nodes; ++v)
      pot[v] += (reached[v] && dist[v] < dist[t]) ? dist[v] : dist[t];

    T push = remaining;
    for (std::size_t v = t; v != s; v = parent[v]) {
      T cap{}, w{};
      arc(parent[v], v, cap, w);
      if (cap < push) push = cap;
    }
    for (std::size_t v = t; v != s; v = parent[v]) {
      std::size_t u = parent[v];
      if (u == s)
        out[v] += push;
      else if (v == s)
        out[u] -= push;
      else if (v == t)
        in[u - r] += push;
      else if (u == t)
        in[v - r] -= push;
      else if (u < r)
        flow[u * c + (v - r)] += push;
      else
        flow[v * c + (u - r)] -= push;
    }
    remaining -= push;
  }
  return flow;
}

}  // namespace

FlowResult solve(std::span<const Rational> supply, std::span<const Rational> demand,
                 std::span<const Rational> cost) {
  const std::size_t r = supply.size(), c = demand.size();
  if (cost.size() != r * c) throw InvalidArgument("cost matrix has the wrong shape");
  Rational total_supply = 0, total_demand = 0;
  for (const auto& a : supply) {
    if (a < 0) throw InvalidArgument("negative supply");
    total_supply += a;
  }
  for (const auto& b : demand) {
    if (b < 0) throw InvalidArgument("negative demand");
    total_demand += b;
  }
  if (total_supply != total_demand) throw InvalidArgument("unbalanced transport problem");
  for (const auto& w : cost)
    if (w < 0) throw InvalidArgument("negative transport cost");

  FlowResult result;
  result.cost = 0;
  if (r == 0 || c == 0 || total_supply == 0) return result;

  std::vector<Rational> masses(supply.begin(), supply.end());
  masses.insert(masses.end(), demand.begin(), demand.end());
  const BigInt mass_scale = lcm_of_denominators(masses);
  const BigInt cost_scale = lcm_of_denominators(cost);

  std::vector<BigInt> a(r), b(c), w(r * c);
  BigInt total = 0, max_cost = 0;
  for (std::size_t i = 0; i < r; ++i) {
    a[i] = scaled(supply[i], mass_scale);
    total += a[i];
  }
  for (std::size_t j = 0; j < c; ++j) b[j] = scaled(demand[j], mass_scale);
  for (std::size_t k = 0; k < r * c; ++k) {
    w[k] = scaled(cost[k], cost_scale);
    if (w[k] > max_cost) max_cost = w[k];
  }

  // Path lengths and potentials stay within (nodes + 2) * max_cost in magnitude.
  const BigInt limit = BigInt(1) << 60;
  const bool small = total < limit && max_cost * BigInt(static_cast<long>(4 * (r + c + 4))) < limit;

  std::vector<BigInt> flow_big;
  if (small) {
    std::vector<std::int64_t> a64(r), b64(c), w64(r * c);
    for (std::size_t i = 0; i < r; ++i) a64[i] = from_big<std::int64_t>(a[i]);
    for (std::size_t j = 0; j < c; ++j) b64[j] = from_big<std::int64_t>(b[j]);
    for (std::size_t k = 0; k < r * c; ++k) w64[k] = from_big<std::int64_t>(w[k]);
    auto f = ssp<std::int64_t>(a64, b64, w64);
    flow_big.reserve(f.size());
    for (auto v : f) flow_big.push_back(to_big(v));
  } else {
    flow_big = ssp<BigInt>(a, b, w);
  }

  BigInt weighted = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const BigInt& f = flow_big[i * c + j];
      if (f == 0) continue;
      weighted += f * w[i * c + j];
      Rational mass(f, mass_scale);
      mass.canonicalize();
      result.plan.push_back({i, j, std::move(mass)});
    }
  result.cost = Rational(weighted, BigInt(mass_scale * cost_scale));
  result.cost.canonicalize();
  return result;
}

}  // namespace emergence::transport
