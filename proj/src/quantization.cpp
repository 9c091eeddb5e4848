#include "emergence/quantization.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace emergence {

namespace {

Rational w1(const DiscreteMeasure& a, const DiscreteMeasure& b, int n) {
  if (n <= 0) return wasserstein(a, b, 1).power_cost;
  return wasserstein(a, b, 1, BowenContext{n, MetricMode::bowen}).power_cost;
}

DiscreteMeasure mixture(const std::vector<DiscreteMeasure>& parts, const std::vector<Rational>& coefficients) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (coefficients[i] == 0) continue;
    for (const auto& a : parts[i].atoms()) atoms.push_back({a.word, a.weight * coefficients[i]});
  }
  return DiscreteMeasure(parts.front().system(), std::move(atoms));
}

// Visit every composition of `total` into `parts` nonnegative integers.
template <class Visit>
void compositions(std::size_t parts, int total, std::vector<int>& current, const Visit& visit) {
  if (current.size() + 1 == parts) {
    current.push_back(total);
    visit(current);
    current.pop_back();
    return;
  }
  for (int v = total; v >= 0; --v) {
    current.push_back(v);
    compositions(parts, total - v, current, visit);
    current.pop_back();
  }
}

// Weighted costs w_k d(candidate, atom_k), scaled to a common integer denominator when possible.
struct CostMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Rational> exact;
  std::vector<std::int64_t> scaled;  // empty when the common scale does not fit
  Rational scale = 1;                // exact = scaled / scale

  Rational codebook_cost(const std::vector<std::size_t>& book) const {
    Rational total = 0;
    for (std::size_t k = 0; k < cols; ++k) {
      const Rational* best = &exact[book.front() * cols + k];
      for (auto r : book) best = std::min(best, &exact[r * cols + k], [](auto* a, auto* b) { return *a < *b; });
      total += *best;
    }
    return total;
  }
};

CostMatrix weighted_costs(const MeasureEnsemble& ensemble, const std::vector<DiscreteMeasure>& candidates, int n,
                          unsigned workers) {
  CostMatrix m;
  m.rows = candidates.size();
  m.cols = ensemble.size();
  auto table = DistanceTable::build(m.rows, m.cols, [&](std::size_t r, std::size_t k) {
    return w1(candidates[r], ensemble.atoms()[k].measure, n);
  }, false, workers);
  m.exact.reserve(m.rows * m.cols);
  BigInt lcm = 1;
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t k = 0; k < m.cols; ++k) {
      Rational v = table.at(r, k) * ensemble.atoms()[k].weight;
      v.canonicalize();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
      m.exact.push_back(std::move(v));
    }
  // Sums of up to cols entries must stay below 2^62.
  const BigInt limit = (BigInt(1) << 62) / BigInt(static_cast<unsigned long>(m.cols + 1));
  std::vector<std::int64_t> scaled;
  scaled.reserve(m.exact.size());
  for (const auto& v : m.exact) {
    BigInt s = v.get_num() * (lcm / v.get_den());
    if (s >= limit) return m;
    scaled.push_back(static_cast<std::int64_t>(s.get_si()));
  }
  m.scaled = std::move(scaled);
  m.scale = Rational(lcm);
  return m;
}

// Best codebook of exactly `size` rows by exhaustive search; nullopt when none meets the budget.
std::optional<std::vector<std::size_t>> best_of_size(const CostMatrix& m, std::size_t size, const Rational& eps) {
  if (size > m.rows) return std::nullopt;
  std::vector<std::size_t> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  std::optional<std::vector<std::size_t>> best;
  Rational best_cost;
  std::int64_t best_scaled = std::numeric_limits<std::int64_t>::max();
  std::int64_t budget = -1;
  if (!m.scaled.empty()) {
    Rational b = eps * m.scale;
    BigInt floor_b;
    mpz_fdiv_q(floor_b.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    budget = floor_b.fits_slong_p() ? floor_b.get_si() : std::numeric_limits<std::int64_t>::max();
  }
  for (;;) {
    if (!m.scaled.empty()) {
      std::int64_t total = 0;
      for (std::size_t k = 0; k < m.cols && total <= budget; ++k) {
        std::int64_t low = m.scaled[pick[0] * m.cols + k];
        for (std::size_t j = 1; j < size; ++j) low = std::min(low, m.scaled[pick[j] * m.cols + k]);
        total += low;
      }
      if (total <= budget && total < best_scaled) {
        best_scaled = total;
        best = pick;
      }
    } else {
      Rational c = m.codebook_cost(pick);
      if (c <= eps && (!best || c < best_cost)) {
        best_cost = c;
        best = pick;
      }
    }
    // Next combination in lexicographic order.
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == m.rows - size + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

BigInt combinations(std::size_t n, std::size_t k) {
  return binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(k));
}

DiscreteMeasure truncate_atoms(const DiscreteMeasure& mu, std::size_t length) {
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({Word(a.word.begin(), a.word.begin() + static_cast<long>(length)), a.weight});
  return DiscreteMeasure(mu.system(), std::move(atoms));
}

}  // namespace

MeasureEnsemble::MeasureEnsemble(std::vector<EnsembleAtom> atoms) {
  if (atoms.empty()) throw InvalidArgument("empty ensemble");
  std::map<DiscreteMeasure, Rational> merged;
  Rational total = 0;
  for (auto& a : atoms) {
    if (a.weight < 0) throw InvalidArgument("negative ensemble weight");
    require_same_system(a.measure.system(), atoms.front().measure.system());
    total += a.weight;
    if (a.weight == 0) continue;
    auto [it, fresh] = merged.try_emplace(a.measure, a.weight);
    if (!fresh) it->second += a.weight;
  }
  if (total != 1) throw InvalidArgument("ensemble weights sum to " + to_string(total) + ", expected 1");
  for (auto& [m, w] : merged) atoms_.push_back({m, w});
}

MeasureEnsemble MeasureEnsemble::single(const DiscreteMeasure& mu) { return MeasureEnsemble({{mu, Rational(1)}}); }

MeasureEnsemble MeasureEnsemble::uniform(const std::vector<DiscreteMeasure>& measures) {
  if (measures.empty()) throw InvalidArgument("empty ensemble");
  Rational w(1, static_cast<unsigned long>(measures.size()));
  w.canonicalize();
  std::vector<EnsembleAtom> atoms;
  for (const auto& m : measures) atoms.push_back({m, w});
  return MeasureEnsemble(std::move(atoms));
}

DiscreteMeasure MeasureEnsemble::barycenter() const {
  std::vector<DiscreteMeasure> parts;
  std::vector<Rational> weights;
  for (const auto& a : atoms_) {
    parts.push_back(a.measure);
    weights.push_back(a.weight);
  }
  return mixture(parts, weights);
}

std::vector<DiscreteMeasure> mixture_candidates(const std::vector<DiscreteMeasure>& measures, int grid_steps,
                                                std::size_t cap) {
  if (measures.empty()) throw InvalidArgument("no measures to mix");
  if (grid_steps < 1) throw InvalidArgument("grid steps must be >= 1");
  std::vector<DiscreteMeasure> out(measures.begin(), measures.end());
  const std::size_t c = measures.size();
  const auto steps = static_cast<unsigned long>(grid_steps);
  const bool full = c > 1 && combinations(c + steps - 1, c - 1) <= BigInt(static_cast<unsigned long>(cap));
  if (full) {
    std::vector<int> current;
    compositions(c, grid_steps, current, [&](const std::vector<int>& parts) {
      std::vector<Rational> coefficients;
      for (int v : parts) {
        Rational q(v, grid_steps);
        q.canonicalize();
        coefficients.push_back(q);
      }
      out.push_back(mixture(measures, coefficients));
    });
  } else {
    for (std::size_t i = 0; i < c && out.size() < cap; ++i)
      for (std::size_t j = i + 1; j < c && out.size() < cap; ++j)
        for (int t = 1; t < grid_steps && out.size() < cap; ++t) {
          Rational a(t, grid_steps), b(grid_steps - t, grid_steps);
          a.canonicalize();
          b.canonicalize();
          out.push_back(mixture({measures[i], measures[j]}, {a, b}));
        }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational codebook_cost(const MeasureEnsemble& ensemble, const std::vector<DiscreteMeasure>& codebook, int n) {
  if (codebook.empty()) throw InvalidArgument("empty codebook");
  Rational total = 0;
  for (const auto& a : ensemble.atoms()) {
    std::optional<Rational> best;
    for (const auto& c : codebook) {
      Rational d = w1(a.measure, c, n);
      if (!best || d < *best) best = d;
    }
    total += a.weight * *best;
  }
  return total;
}

std::size_t quantization_lower_bound(const MeasureEnsemble& ensemble, int n, const Rational& eps) {
  const std::size_t c = ensemble.size();
  if (c == 1) return 1;
  std::optional<Rational> spread;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = i + 1; j < c; ++j) {
      Rational d = w1(ensemble.atoms()[i].measure, ensemble.atoms()[j].measure, n);
      if (!spread || d < *spread) spread = d;
    }
  std::vector<Rational> weights;
  for (const auto& a : ensemble.atoms()) weights.push_back(a.weight);
  std::sort(weights.begin(), weights.end());
  // With N codewords at least c - N atoms share a codeword with another and pay >= spread / 2.
  for (std::size_t size = 1; size <= c; ++size) {
    Rational light = 0;
    for (std::size_t k = 0; k < c - size; ++k) light += weights[k];
    if (*spread / 2 * light <= eps) return size;
  }
  return c;
}

QuantizationResult quantization(const MeasureEnsemble& ensemble, int n, const Rational& eps,
                                const QuantizationOptions& options) {
  if (eps < 0) throw InvalidArgument("eps must be nonnegative");
  QuantizationResult result;
  std::vector<DiscreteMeasure> atoms;
  for (const auto& a : ensemble.atoms()) atoms.push_back(a.measure);
  const std::vector<DiscreteMeasure> candidates =
      options.candidates ? *options.candidates : mixture_candidates(atoms, options.grid_steps, options.candidate_cap);
  if (candidates.empty()) throw InvalidArgument("empty candidate set");
  result.candidates = candidates.size();
  result.lower = quantization_lower_bound(ensemble, n, eps);

  if (options.spanning && !options.spanning->empty() &&
      codebook_cost(ensemble, *options.spanning, n) <= eps)
    result.spanning_size = options.spanning->size();

  const CostMatrix costs = weighted_costs(ensemble, candidates, n, options.workers);
  constexpr unsigned long kEnumerationCap = 50'000'000;
  for (std::size_t size = 1; size <= std::min(options.exact_max, candidates.size()); ++size) {
    if (combinations(candidates.size(), size) > BigInt(kEnumerationCap)) break;
    if (auto best = best_of_size(costs, size, eps)) {
      result.q = size;
      result.exhaustive = true;
      for (auto r : *best) result.codebook.push_back(candidates[r]);
      result.cost = costs.codebook_cost(*best);
      break;
    }
  }

  if (result.q == 0) {
    // Greedy: add the candidate that lowers the cost most until the budget is met.
    std::vector<std::size_t> book;
    std::vector<bool> used(candidates.size(), false);
    Rational current = -1;
    while (book.size() < candidates.size()) {
      std::optional<std::size_t> pick;
      Rational pick_cost;
      for (std::size_t r = 0; r < candidates.size(); ++r) {
        if (used[r]) continue;
        book.push_back(r);
        Rational c = costs.codebook_cost(book);
        book.pop_back();
        if (!pick || c < pick_cost) {
          pick = r;
          pick_cost = c;
        }
      }
      book.push_back(*pick);
      used[*pick] = true;
      current = pick_cost;
      if (current <= eps) break;
    }
    if (current > eps) throw Error("candidate set cannot reach the cost budget");
    result.q = book.size();
    for (auto r : book) result.codebook.push_back(candidates[r]);
    result.cost = current;
  }
  if (result.spanning_size && *result.spanning_size < result.q) {
    result.q = *result.spanning_size;
    result.codebook = *options.spanning;
    result.cost = codebook_cost(ensemble, result.codebook, n);
    result.exhaustive = false;
  }
  if (result.lower > result.q) throw VerificationFailure("quantization lower bound exceeds a valid codebook");
  result.exact = result.q == result.lower;
  return result;
}

bool is_invariant(const DiscreteMeasure& mu) {
  const std::size_t length = mu.min_length();
  if (length != mu.max_length() || length < 2) return false;
  return pushforward(mu) == truncate_atoms(mu, length - 1);
}

ScalingReport measure_emergence(const MeasureEnsemble& decomposition, const IntRange& n_range,
                                const std::vector<Rational>& eps_grid, const QuantizationOptions& options) {
  for (const auto& a : decomposition.atoms())
    if (!is_invariant(a.measure)) throw InvalidArgument("decomposition atom is not f-invariant");
  if (eps_grid.empty()) throw InvalidArgument("empty eps grid");
  ScalingReport report;
  report.mode = ReportMode::entropy_order;
  for (const auto& eps : eps_grid)
    for (int n : n_range.values()) {
      QuantizationResult q = quantization(decomposition, n, eps, options);
      ScalingCell c;
      c.n = n;
      c.eps = eps;
      c.lower = BigInt(static_cast<unsigned long>(q.lower));
      c.upper = BigInt(static_cast<unsigned long>(q.q));
      c.exact = q.exact;
      c.witness = "codebook " + std::to_string(q.q) + " cost " + to_string(q.cost);
      report.cells.push_back(std::move(c));
    }
  report.notes.push_back("cells: quantization of the decomposition, lower from pairwise separation");
  fit_report(report, decomposition.system()->alphabet_size());
  return report;
}

PointwiseResult pointwise_emergence(const std::vector<DiscreteMeasure>& vx, int n, const Rational& eps,
                                    const QuantizationOptions& options) {
  if (vx.empty()) throw InvalidArgument("V(x) is empty");
  if (eps < 0) throw InvalidArgument("eps must be nonnegative");
  const std::vector<DiscreteMeasure> candidates =
      options.candidates ? *options.candidates : mixture_candidates(vx, options.grid_steps, options.candidate_cap);
  auto cover_table = DistanceTable::build(candidates.size(), vx.size(), [&](std::size_t r, std::size_t k) {
    return w1(candidates[r], vx[k], n);
  }, false, options.workers);
  SearchOptions search;
  search.strategy = candidates.size() <= kExactCap ? Strategy::exact : Strategy::greedy;
  CoverResult cover = covering_count(cover_table, eps, CoverConvention::closed, search);

  // Points pairwise > 2 eps apart need distinct closed eps-balls.
  auto pack_table = DistanceTable::build(vx.size(), vx.size(), [&](std::size_t i, std::size_t j) {
    return w1(vx[i], vx[j], n);
  }, true, options.workers);
  SearchOptions pack_search;
  pack_search.strategy = vx.size() <= kExactCap ? Strategy::exact : Strategy::greedy;
  PackingResult packing = packing_count(pack_table, 2 * eps, SeparationConvention::greater, pack_search);

  PointwiseResult out;
  out.count = cover.count;
  for (auto r : cover.centers) out.centers.push_back(candidates[r]);
  out.exact = packing.count == cover.count;
  return out;
}

}  // namespace emergence
