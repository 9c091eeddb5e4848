#include "emergence/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace emergence {

namespace {

double log_count(const BigInt& count) { return count <= 1 ? 0.0 : log_of(count); }

// Runs task(i) for i < count on up to `workers` threads; the first exception is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned workers, const Task& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_guard;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_guard);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Cells in eps-grid order, n ascending within each eps.
std::vector<ScalingCell> blank_cells(const std::vector<int>& ns, const std::vector<Rational>& eps_grid) {
  if (ns.empty()) throw InvalidArgument("empty n range");
  if (eps_grid.empty()) throw InvalidArgument("empty eps grid");
  std::vector<ScalingCell> cells;
  for (const auto& eps : eps_grid) {
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    for (int n : ns) {
      ScalingCell c;
      c.n = n;
      c.eps = eps;
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t index) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
}

std::optional<unsigned long> power_exponent(const BigInt& count, int m) {
  if (count < 1) return std::nullopt;
  if (m == 1) return count == 1 ? std::optional<unsigned long>(0) : std::nullopt;
  BigInt rest = count;
  unsigned long e = 0;
  while (rest > 1) {
    if (mpz_fdiv_ui(rest.get_mpz_t(), static_cast<unsigned long>(m)) != 0) return std::nullopt;
    rest /= static_cast<unsigned long>(m);
    ++e;
  }
  return e;
}

BigInt nonempty_subsets(std::uint64_t elements) {
  if (elements > (1u << 22)) throw ResourceCap("power-set count above 2^(2^22)");
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 2, elements);
  return out - 1;
}

BigInt big(std::uint64_t v) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
  return out;
}

std::uint64_t checked_count(const SymbolicSystem& sys, int n, const Rational& eps, CoverConvention cover) {
  const std::uint64_t c = point_count(sys, n, eps, cover);
  if (c == UINT64_MAX) throw ResourceCap("word count overflows 64 bits");
  return c;
}

// Lower cell for measure spaces: Hamming certificate over (n, 4 eps)-apart
// Diracs, or closed-class Diracs (pairwise W_1^n > eps) when larger.
void measure_lower(const SystemHandle& system, int n, const Rational& eps, const OrderPolicy& policy,
                   std::uint64_t seed, ScalingCell& cell) {
  const std::uint64_t diracs = checked_count(*system, n, eps, CoverConvention::closed);
  cell.lower = big(diracs);
  cell.witness = "dirac classes " + std::to_string(diracs);
  Certificate base = apart_measure_family(system, n, 4 * eps);
  const std::size_t code = best_code_length(base.measures.size(), policy.code_cap);
  if (code < 8) return;
  SampleOptions sample = policy.pairs;
  sample.seed = seed;
  Certificate cert = hamming_measure_family(base, code, sample);
  if (!cert.verification.passed) throw VerificationFailure("Hamming family failed verification");
  if (cert.family_size > cell.lower) {
    cell.lower = cert.family_size;
    cell.witness = "hamming N=" + std::to_string(code) + " pairs=" + std::to_string(cert.verification.pairs_checked);
  }
}

// Lower cell for hyperspaces: verified B_phi family over closed-class points, or the singletons.
void set_lower(const SystemHandle& system, int n, const Rational& eps, const OrderPolicy& policy,
               std::uint64_t seed, ScalingCell& cell) {
  const std::uint64_t points = checked_count(*system, n, eps, CoverConvention::closed);
  cell.lower = big(points);
  cell.witness = "singletons " + std::to_string(points);
  const std::size_t code = best_code_length(points, policy.code_cap);
  if (code < 8) return;
  SampleOptions sample = policy.pairs;
  sample.seed = seed;
  Certificate cert = hyperspace_family(system, n, eps, code, SetDirection::separated, sample);
  if (!cert.verification.passed) throw VerificationFailure("B_phi family failed verification");
  if (cert.family_size > cell.lower) {
    cell.lower = cert.family_size;
    cell.witness = "b_phi N=" + std::to_string(code) + " pairs=" + std::to_string(cert.verification.pairs_checked);
  }
}

// Upper cell for measure spaces from the Bolley family at delta = eps.
void measure_upper(const SystemHandle& system, int n, const Rational& eps, const OrderPolicy& policy,
                   std::uint64_t seed, ScalingCell& cell) {
  const SymbolicSystem& sys = *system;
  if (eps >= sys.diameter()) {
    cell.upper = 1;  // any measure is within diam of any other
    return;
  }
  BolleyCover cover = bolley_cover(system, n, eps, 1, policy.samples, seed);
  cell.upper = cover.family_size;
  const double half_cover = std::log(static_cast<double>(checked_count(sys, n, eps / 2, CoverConvention::open)));
  const double slack = std::log(std::log(8.0 * std::numbers::e * to_double(sys.diameter()) / to_double(eps)));
  cell.bound_ok = cover.within_bound && cover.spanned == cover.sampled &&
                  log_log(cover.family_size) <= half_cover + slack + 1e-12;
}

// Upper cell for hyperspaces: nonempty subsets of the open eps-cover E, checked by
// tracing random closed sets B to C = {x in E : B meets the d_n-ball at x}.
void set_upper(const SystemHandle& system, int n, const Rational& eps, const OrderPolicy& policy,
               std::uint64_t seed, ScalingCell& cell) {
  const SymbolicSystem& sys = *system;
  const int prefix = ball_resolution(sys, n, eps, CoverConvention::open);
  const std::uint64_t points = checked_count(sys, n, eps, CoverConvention::open);
  cell.upper = nonempty_subsets(points);
  if (policy.samples == 0 || sys.diameter() == 0) return;
  if (points > (1u << 16)) throw ResourceCap("spanning check over more than 2^16 cover points");

  const int resolution = std::max(prefix, n) + 2;
  const std::vector<Word> cover = prefix == 0 ? std::vector<Word>{extend_min(sys, Word{}, resolution)}
                                              : class_representatives(sys, prefix, resolution);
  const BowenContext ctx{n, MetricMode::bowen};
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < policy.samples; ++s) {
    const std::size_t size = 1 + draw_below(rng, 8);
    std::vector<Word> words;
    for (std::size_t i = 0; i < size; ++i) words.push_back(random_word(sys, resolution, rng));
    FiniteClosedSet b(system, words);
    std::vector<Word> traced;
    for (const auto& x : cover)
      for (const auto& w : b.points())
        if (word_distance(sys, w, x, ctx).value < eps) {
          traced.push_back(x);
          break;
        }
    if (traced.empty() || hausdorff(b, FiniteClosedSet(system, traced), ctx) > eps) {
      cell.bound_ok = false;
      return;
    }
  }
}

std::vector<Rational> sorted_decreasing(std::vector<Rational> grid) {
  std::sort(grid.begin(), grid.end(), std::greater<>());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

std::string to_string(ReportMode mode) {
  switch (mode) {
    case ReportMode::entropy: return "entropy";
    case ReportMode::entropy_order: return "entropy_order";
    case ReportMode::metric_order: return "metric_order";
    case ReportMode::dimension: return "dimension";
  }
  return "entropy";
}

const std::vector<SlopeFit>& ScalingReport::eps_trend() const {
  switch (mode) {
    case ReportMode::entropy: return single_log;
    case ReportMode::entropy_order: return double_log;
    default: return ratios;
  }
}

const ScalingCell& ScalingReport::cell(int n, const Rational& eps) const {
  for (const auto& c : cells)
    if (c.n == n && c.eps == eps) return c;
  throw InvalidArgument("no cell at n=" + std::to_string(n) + " eps=" + to_string(eps));
}

double log_log(const BigInt& count) {
  if (count <= 1) return 0.0;
  return std::log(log_of(count));
}

double top_half_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw InvalidArgument("slope needs matching nonempty samples");
  if (x.size() == 1) return x[0] == 0 ? 0.0 : y[0] / x[0];
  const std::size_t keep = std::max<std::size_t>(2, (x.size() + 1) / 2);
  const std::size_t from = x.size() - keep;
  double mx = 0, my = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(keep);
  my /= static_cast<double>(keep);
  double sxy = 0, sxx = 0;
  for (std::size_t i = from; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0 ? 0.0 : sxy / sxx;
}

void fit_report(ScalingReport& report, int alphabet_size) {
  report.single_log.clear();
  report.double_log.clear();
  report.ratios.clear();
  std::vector<Rational> grid;
  for (const auto& c : report.cells) grid.push_back(c.eps);
  grid = sorted_decreasing(std::move(grid));

  const bool static_mode = report.mode == ReportMode::metric_order || report.mode == ReportMode::dimension;
  for (const auto& eps : grid) {
    std::vector<const ScalingCell*> row;
    for (const auto& c : report.cells)
      if (c.eps == eps) row.push_back(&c);
    std::sort(row.begin(), row.end(), [](auto* a, auto* b) { return a->n < b->n; });

    if (static_mode) {
      const double scale = -std::log(to_double(eps));
      const ScalingCell& c = *row.front();
      auto transform = [&](const BigInt& v) {
        return report.mode == ReportMode::dimension ? log_count(v) : log_log(v);
      };
      SlopeFit fit{eps, 0, 0, std::nullopt};
      if (scale > 0) {
        fit.lower = transform(c.lower) / scale;
        fit.upper = transform(c.upper) / scale;
      }
      report.ratios.push_back(fit);
      continue;
    }

    std::vector<double> x, lo1, hi1, lo2, hi2;
    for (const auto* c : row) {
      x.push_back(c->n);
      lo1.push_back(log_count(c->lower));
      hi1.push_back(log_count(c->upper));
      lo2.push_back(log_log(c->lower));
      hi2.push_back(log_log(c->upper));
    }
    SlopeFit single{eps, top_half_slope(x, lo1), top_half_slope(x, hi1), std::nullopt};
    SlopeFit dbl{eps, top_half_slope(x, lo2), top_half_slope(x, hi2), std::nullopt};

    // Exact rational slope when every cell is an exact power of m.
    std::vector<Rational> exps;
    bool exact = true;
    for (const auto* c : row) {
      auto e = c->lower == c->upper ? power_exponent(c->lower, alphabet_size) : std::nullopt;
      if (!e) {
        exact = false;
        break;
      }
      exps.emplace_back(*e);
    }
    if (exact) {
      const std::size_t keep = row.size() == 1 ? 1 : std::max<std::size_t>(2, (row.size() + 1) / 2);
      const std::size_t from = row.size() - keep;
      if (keep == 1) {
        single.exact_over_log_m = exps[0] / Rational(row[0]->n);
      } else {
        Rational mx = 0, my = 0;
        for (std::size_t i = from; i < row.size(); ++i) {
          mx += row[i]->n;
          my += exps[i];
        }
        mx /= static_cast<long>(keep);
        my /= static_cast<long>(keep);
        Rational sxy = 0, sxx = 0;
        for (std::size_t i = from; i < row.size(); ++i) {
          sxy += (Rational(row[i]->n) - mx) * (exps[i] - my);
          sxx += (Rational(row[i]->n) - mx) * (Rational(row[i]->n) - mx);
        }
        Rational slope = sxx == 0 ? Rational(0) : Rational(sxy / sxx);
        slope.canonicalize();
        single.exact_over_log_m = slope;
      }
    }
    report.single_log.push_back(single);
    report.double_log.push_back(dbl);
  }
}

std::vector<int> IntRange::values() const {
  if (lo < 1 || hi < lo) throw InvalidArgument("range must satisfy 1 <= lo <= hi");
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<Rational> lambda_grid(const SymbolicSystem& system, const IntRange& exponents) {
  std::vector<Rational> out;
  for (int k : exponents.values()) out.push_back(system.lambda_pow(k));
  return out;
}

ScalingReport entropy_estimate(const SystemHandle& system, const IntRange& n_range,
                               const std::vector<Rational>& eps_grid) {
  ScalingReport report;
  report.mode = ReportMode::entropy;
  report.cells = blank_cells(n_range.values(), eps_grid);
  for (auto& c : report.cells) {
    const BigInt count = big(checked_count(*system, c.n, c.eps, CoverConvention::open));
    c.lower = c.upper = count;
    c.exact = true;
    c.witness = "cylinders of length " +
                std::to_string(ball_resolution(*system, c.n, c.eps, CoverConvention::open));
  }
  fit_report(report, system->alphabet_size());
  return report;
}

ScalingReport measure_space_entropy_order(const SystemHandle& system, const IntRange& n_range,
                                          const std::vector<Rational>& eps_grid, const OrderPolicy& policy) {
  ScalingReport report;
  report.mode = ReportMode::entropy_order;
  report.cells = blank_cells(n_range.values(), eps_grid);
  parallel_for(report.cells.size(), policy.workers, [&](std::size_t i) {
    ScalingCell& c = report.cells[i];
    if (system->diameter() == 0) {
      c.lower = c.upper = 1;
      c.exact = true;
      c.witness = "single point";
      return;
    }
    measure_upper(system, c.n, c.eps, policy, cell_seed(policy.seed, 2 * i), c);
    measure_lower(system, c.n, c.eps, policy, cell_seed(policy.seed, 2 * i + 1), c);
    if (c.lower > c.upper) throw VerificationFailure("lower cell exceeds upper cell");
    c.exact = c.lower == c.upper;
  });
  report.notes.push_back("upper: Bolley family at delta = eps, p = 1, closed delta/2 cover");
  report.notes.push_back("lower: Hamming family over (n, 4 eps)-apart Diracs or closed-class Diracs");
  fit_report(report, system->alphabet_size());
  return report;
}

ScalingReport hyperspace_entropy_order(const SystemHandle& system, const IntRange& n_range,
                                       const std::vector<Rational>& eps_grid, const OrderPolicy& policy) {
  ScalingReport report;
  report.mode = ReportMode::entropy_order;
  report.cells = blank_cells(n_range.values(), eps_grid);
  parallel_for(report.cells.size(), policy.workers, [&](std::size_t i) {
    ScalingCell& c = report.cells[i];
    set_upper(system, c.n, c.eps, policy, cell_seed(policy.seed, 2 * i), c);
    set_lower(system, c.n, c.eps, policy, cell_seed(policy.seed, 2 * i + 1), c);
    if (c.lower > c.upper) throw VerificationFailure("lower cell exceeds upper cell");
    c.exact = c.lower == c.upper;
  });
  report.notes.push_back("upper: nonempty subsets of an open eps-cover");
  report.notes.push_back("lower: B_phi family over closed-class points or the singletons");
  fit_report(report, system->alphabet_size());
  return report;
}

ScalingReport metric_order_estimate(const StaticCounter& counter, const std::vector<Rational>& eps_grid,
                                    ReportMode mode) {
  if (mode != ReportMode::metric_order && mode != ReportMode::dimension)
    throw InvalidArgument("static estimate needs metric_order or dimension mode");
  if (eps_grid.empty()) throw InvalidArgument("empty eps grid");
  ScalingReport report;
  report.mode = mode;
  for (const auto& eps : sorted_decreasing(eps_grid)) {
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    CountBracket b = counter(eps);
    ScalingCell c;
    c.n = 0;
    c.eps = eps;
    c.lower = b.lower;
    c.upper = b.upper;
    c.exact = b.exact.has_value();
    if (c.lower > c.upper) throw VerificationFailure("lower count exceeds upper count");
    report.cells.push_back(std::move(c));
  }
  fit_report(report, 1);
  return report;
}

ScalingReport dimension_estimate(const SystemHandle& system, const std::vector<Rational>& eps_grid) {
  return metric_order_estimate(
      [&](const Rational& eps) {
        const BigInt count = big(checked_count(*system, 1, eps, CoverConvention::open));
        return CountBracket{count, count, count};
      },
      eps_grid, ReportMode::dimension);
}

Sandwich hyperspace_sandwich(const SystemHandle& system, const std::vector<Rational>& eps_grid,
                             const OrderPolicy& policy) {
  Sandwich out;
  out.dimension = dimension_estimate(system, eps_grid);
  std::map<Rational, std::string> witnesses;
  std::size_t index = 0;
  out.hyperspace = metric_order_estimate(
      [&](const Rational& eps) {
        ScalingCell cell;
        set_lower(system, 1, eps, policy, cell_seed(policy.seed, index++), cell);
        witnesses[eps] = cell.witness;
        const BigInt upper = nonempty_subsets(checked_count(*system, 1, eps, CoverConvention::open));
        return CountBracket{cell.lower, upper, std::nullopt};
      },
      eps_grid, ReportMode::metric_order);
  for (auto& c : out.hyperspace.cells) c.witness = witnesses[c.eps];

  std::vector<double> x, y;
  for (const auto& c : out.dimension.cells) {
    x.push_back(-std::log(to_double(c.eps)));
    y.push_back(log_count(c.upper));
  }
  // Full grid fit: cells are ordered by decreasing eps, so x increases.
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  out.dimension_limit = sxx == 0 ? (x.size() && x[0] > 0 ? y[0] / x[0] : 0.0) : sxy / sxx;

  out.contains_dimension = true;
  for (const auto& fit : out.hyperspace.ratios) {
    const bool inside = fit.lower <= out.dimension_limit + 1e-12 && out.dimension_limit <= fit.upper + 1e-12;
    out.hyperspace.notes.push_back("eps=" + to_string(fit.eps) + (inside ? " contains" : " misses") +
                                   " the dimension estimate");
    out.contains_dimension = out.contains_dimension && inside;
  }
  return out;
}

ScalingReport measure_metric_order(const SystemHandle& system, const std::vector<Rational>& eps_grid,
                                   const OrderPolicy& policy) {
  std::size_t index = 0;
  ScalingReport report = metric_order_estimate(
      [&](const Rational& eps) {
        ScalingCell cell;
        if (system->diameter() == 0) return CountBracket{1, 1, BigInt(1)};
        measure_upper(system, 1, eps, policy, cell_seed(policy.seed, 2 * index), cell);
        measure_lower(system, 1, eps, policy, cell_seed(policy.seed, 2 * index + 1), cell);
        ++index;
        if (!cell.bound_ok) throw VerificationFailure("Bolley family failed its spanning check");
        return CountBracket{cell.lower, cell.upper, std::nullopt};
      },
      eps_grid, ReportMode::metric_order);
  return report;
}

}  // namespace emergence
