#include "emergence/counting.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "emergence/kernels.hpp"

namespace emergence {

namespace {

// Row-major bitset matrix: rows x words64 words.
struct BitRows {
  std::size_t rows = 0, words = 0;
  std::vector<std::uint64_t> bits;

  BitRows(std::size_t r, std::size_t cols) : rows(r), words((cols + 63) / 64), bits(r * words, 0) {}
  std::uint64_t* row(std::size_t i) { return bits.data() + i * words; }
  const std::uint64_t* row(std::size_t i) const { return bits.data() + i * words; }
  void set(std::size_t i, std::size_t j) { row(i)[j / 64] |= std::uint64_t{1} << (j % 64); }
};

void set_bit(std::vector<std::uint64_t>& v, std::size_t j) { v[j / 64] |= std::uint64_t{1} << (j % 64); }

std::vector<std::size_t> shuffled(std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[draw_below(rng, i)]);
  return order;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<std::filesystem::path> cache_file(const std::string& key) {
  if (key.empty()) return std::nullopt;
  const char* dir = std::getenv("EMERGENCE_LAB_CACHE");
  if (!dir || !*dir) return std::nullopt;
  std::ostringstream name;
  name << std::hex << fnv1a(key) << ".dist";
  return std::filesystem::path(dir) / name.str();
}

// Maximum independent set of the conflict graph on <= 32 vertices.
void max_independent(std::uint32_t candidates, std::uint32_t chosen, const std::vector<std::uint32_t>& conflict,
                     std::uint32_t& best) {
  if (candidates == 0) {
    if (std::popcount(chosen) > std::popcount(best)) best = chosen;
    return;
  }
  if (std::popcount(chosen) + std::popcount(candidates) <= std::popcount(best)) return;
  const int v = std::countr_zero(candidates);
  const std::uint32_t bit = std::uint32_t{1} << v;
  max_independent(candidates & ~bit & ~conflict[v], chosen | bit, conflict, best);
  max_independent(candidates & ~bit, chosen, conflict, best);
}

// Depth-limited search for a cover of `uncovered` with at most `budget` more rows.
bool cover_within(const BitRows& cov, std::vector<std::uint64_t>& uncovered, std::size_t budget,
                  std::vector<std::size_t>& picked) {
  std::size_t first = cov.words * 64;
  for (std::size_t w = 0; w < cov.words; ++w)
    if (uncovered[w]) {
      first = w * 64 + static_cast<std::size_t>(std::countr_zero(uncovered[w]));
      break;
    }
  if (first == cov.words * 64) return true;
  if (budget == 0) return false;
  for (std::size_t i = 0; i < cov.rows; ++i) {
    if (!((cov.row(i)[first / 64] >> (first % 64)) & 1)) continue;
    std::vector<std::uint64_t> saved = uncovered;
    for (std::size_t w = 0; w < cov.words; ++w) uncovered[w] &= ~cov.row(i)[w];
    picked.push_back(i);
    if (cover_within(cov, uncovered, budget - 1, picked)) return true;
    picked.pop_back();
    uncovered = std::move(saved);
  }
  return false;
}

}  // namespace

bool covers(const Rational& d, const Rational& eps, CoverConvention c) {
  return c == CoverConvention::open ? d < eps : d <= eps;
}

bool separated(const Rational& d, const Rational& eps, SeparationConvention s) {
  return s == SeparationConvention::at_least ? d >= eps : d > eps;
}

DistanceTable DistanceTable::build(std::size_t rows, std::size_t cols, const Metric& metric,
                                   bool symmetric, unsigned workers, const std::string& cache_key) {
  DistanceTable table;
  table.rows_ = rows;
  table.cols_ = cols;
  table.values_.assign(rows * cols, Rational(0));
  if (symmetric && rows != cols) throw InvalidArgument("symmetric table must be square");

  const auto cached = cache_file(cache_key);
  if (cached && std::filesystem::exists(*cached)) {
    std::ifstream in(*cached);
    std::string key;
    std::size_t r = 0, c = 0;
    if (std::getline(in, key) && key == cache_key && (in >> r >> c) && r == rows && c == cols) {
      std::string token;
      std::size_t k = 0;
      for (; k < rows * cols && (in >> token); ++k) table.values_[k] = parse_rational(token);
      if (k == rows * cols) return table;
    }
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(rows, 1)));
  std::atomic<std::size_t> next_row{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next_row++; i < rows; i = next_row++) {
        for (std::size_t j = symmetric ? i : 0; j < cols; ++j) {
          Rational d = (symmetric && i == j) ? Rational(0) : metric(i, j);
          if (symmetric) table.values_[j * cols + i] = d;
          table.values_[i * cols + j] = std::move(d);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_row = rows;
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (cached) {
    std::error_code ec;
    std::filesystem::create_directories(cached->parent_path(), ec);
    std::ofstream out(*cached);
    if (out) {
      out << cache_key << '\n' << rows << ' ' << cols << '\n';
      for (const auto& v : table.values_) out << to_string(v) << '\n';
    }
  }
  return table;
}

PackingResult packing_count(const DistanceTable& table, const Rational& eps, SeparationConvention sep,
                            const SearchOptions& options) {
  if (eps <= 0) throw InvalidArgument("scale must be positive");
  if (table.rows() != table.cols()) throw InvalidArgument("packing needs a square table");
  const std::size_t size = table.rows();
  PackingResult result;
  if (size == 0) return result;

  BitRows conflict(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      if (i != j && !separated(table.at(i, j), eps, sep)) conflict.set(i, j);

  if (options.strategy == Strategy::exact) {
    if (size > options.exact_cap || size > 32)
      throw ResourceCap("exact packing limited to " + std::to_string(options.exact_cap) + " elements");
    std::vector<std::uint32_t> masks(size);
    for (std::size_t i = 0; i < size; ++i) masks[i] = static_cast<std::uint32_t>(conflict.row(i)[0]);
    std::uint32_t best = 0;
    const std::uint32_t all = size == 32 ? ~0u : ((std::uint32_t{1} << size) - 1);
    max_independent(all, 0, masks, best);
    for (std::size_t i = 0; i < size; ++i)
      if ((best >> i) & 1) result.witness.push_back(i);
    result.count = result.witness.size();
    return result;
  }

  std::vector<std::uint64_t> chosen(conflict.words);
  auto pass = [&](const std::vector<std::size_t>& order) {
    std::fill(chosen.begin(), chosen.end(), 0);
    std::vector<std::size_t> picked;
    for (std::size_t i : order)
      if (kernels::popcount_and(conflict.row(i), chosen.data(), conflict.words) == 0) {
        set_bit(chosen, i);
        picked.push_back(i);
      }
    std::sort(picked.begin(), picked.end());
    if (picked.size() > result.witness.size()) result.witness = std::move(picked);
  };
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  pass(order);
  std::mt19937_64 rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) pass(shuffled(size, rng));
  result.count = result.witness.size();
  return result;
}

CoverResult covering_count(const DistanceTable& table, const Rational& eps, CoverConvention cover,
                           const SearchOptions& options) {
  if (eps <= 0) throw InvalidArgument("scale must be positive");
  const std::size_t rows = table.rows(), cols = table.cols();
  CoverResult result;
  if (cols == 0) return result;

  BitRows cov(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (covers(table.at(i, j), eps, cover)) cov.set(i, j);

  std::vector<std::uint64_t> everything(cov.words, ~std::uint64_t{0});
  if (cols % 64) everything.back() = (std::uint64_t{1} << (cols % 64)) - 1;
  std::vector<std::uint64_t> reach(cov.words, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t w = 0; w < cov.words; ++w) reach[w] |= cov.row(i)[w];
  if (reach != everything) throw Error("candidate centers do not cover every element");

  if (options.strategy == Strategy::exact) {
    if (rows > options.exact_cap)
      throw ResourceCap("exact covering limited to " + std::to_string(options.exact_cap) + " candidates");
    for (std::size_t budget = 1; budget <= rows; ++budget) {
      std::vector<std::uint64_t> uncovered = everything;
      std::vector<std::size_t> picked;
      if (cover_within(cov, uncovered, budget, picked)) {
        std::sort(picked.begin(), picked.end());
        result.centers = std::move(picked);
        result.count = result.centers.size();
        return result;
      }
    }
  }

  std::vector<std::uint64_t> uncovered(cov.words);
  auto pass = [&](const std::vector<std::size_t>& order) {
    uncovered = everything;
    std::vector<std::size_t> picked;
    std::size_t remaining = cols;
    while (remaining > 0) {
      std::size_t best = rows;
      std::uint64_t gain = 0;
      for (std::size_t i : order) {
        std::uint64_t g = kernels::popcount_and(cov.row(i), uncovered.data(), cov.words);
        if (g > gain) {
          gain = g;
          best = i;
        }
      }
      for (std::size_t w = 0; w < cov.words; ++w) uncovered[w] &= ~cov.row(best)[w];
      remaining -= gain;
      picked.push_back(best);
      if (!result.centers.empty() && picked.size() >= result.centers.size()) return;
    }
    std::sort(picked.begin(), picked.end());
    result.centers = std::move(picked);
  };
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  pass(order);
  std::mt19937_64 rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) pass(shuffled(rows, rng));
  result.count = result.centers.size();
  return result;
}

int ball_resolution(const SymbolicSystem& system, int n, const Rational& eps, CoverConvention cover) {
  if (n < 1) throw InvalidArgument("horizon must be >= 1");
  const int e = cover == CoverConvention::open ? system.open_exponent(eps) : system.closed_exponent(eps);
  return e == 0 ? 0 : n - 1 + e;
}

std::uint64_t point_count(const SymbolicSystem& system, int n, const Rational& eps, CoverConvention cover) {
  return system.count_words(ball_resolution(system, n, eps, cover));
}

std::size_t prefix_classes(std::vector<Word> words, std::size_t prefix) {
  if (words.empty()) return 0;
  for (const auto& w : words)
    if (w.size() < prefix) throw InexactDistance("word shorter than the class prefix");
  std::sort(words.begin(), words.end());
  std::size_t classes = 1;
  for (std::size_t i = 1; i < words.size(); ++i)
    if (kernels::first_mismatch(words[i - 1].data(), words[i].data(), prefix) < prefix) ++classes;
  return classes;
}

Word extend_min(const SymbolicSystem& system, const Word& word, int length) {
  Word w = word;
  while (static_cast<int>(w.size()) < length) {
    Symbol next = 0;
    if (!w.empty())
      while (!system.allowed(w.back(), next)) ++next;
    w.push_back(next);
  }
  return w;
}

std::vector<Word> class_representatives(const SymbolicSystem& system, int prefix, int resolution) {
  if (resolution < prefix) throw InvalidArgument("resolution below class prefix");
  if (prefix == 0) return {extend_min(system, {}, resolution)};
  std::vector<Word> out;
  for_each_cylinder(system, prefix, [&](const Word& w) { out.push_back(extend_min(system, w, resolution)); });
  return out;
}

FamilyResult apart_count(const std::vector<DiscreteMeasure>& measures, int n, const Rational& eps) {
  FamilyResult result;
  if (measures.empty()) return result;
  const SymbolicSystem& sys = *measures.front().system();
  const int e_open = sys.open_exponent(eps);
  auto apart = [&](const DiscreteMeasure& a, const DiscreteMeasure& b) {
    require_same_system(a.system(), b.system());
    for (const auto& x : a.atoms())
      for (const auto& y : b.atoms()) {
        PowerDistance d = bowen_power(x.word, y.word, n);
        if (!d.exact) throw InexactDistance("support words agree on their overlap");
        if (d.below_open(e_open)) return false;
      }
    return true;
  };
  for (std::size_t i = 0; i < measures.size(); ++i) {
    bool ok = true;
    for (std::size_t j : result.witness)
      if (!apart(measures[i], measures[j])) {
        ok = false;
        break;
      }
    if (ok) result.witness.push_back(i);
  }
  result.count = result.witness.size();
  return result;
}

FamilyResult split_count(const std::vector<FiniteClosedSet>& sets, int n, const Rational& eps) {
  FamilyResult result;
  if (sets.empty()) return result;
  const SymbolicSystem& sys = *sets.front().system();
  const int e_closed = sys.closed_exponent(eps);
  auto split = [&](const FiniteClosedSet& a, const FiniteClosedSet& b) {
    require_same_system(a.system(), b.system());
    for (const auto& x : a.points())
      for (const auto& y : b.points()) {
        PowerDistance d = bowen_power(x, y, n);
        if (!d.exact) throw InexactDistance("set words agree on their overlap");
        if (d.zero || d.exponent >= e_closed) return false;  // d <= eps
      }
    return true;
  };
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool ok = true;
    for (std::size_t j : result.witness)
      if (!split(sets[i], sets[j])) {
        ok = false;
        break;
      }
    if (ok) result.witness.push_back(i);
  }
  result.count = result.witness.size();
  return result;
}

DiscreteMeasure BolleyCover::project(const DiscreteMeasure& mu) const {
  const std::size_t prefix = static_cast<std::size_t>(center_resolution);
  std::vector<Rational> mass(centers.size(), Rational(0));
  for (const auto& a : mu.atoms()) {
    if (a.word.size() < prefix) throw InexactDistance("atom shorter than the cover resolution");
    auto it = std::lower_bound(centers.begin(), centers.end(), a.word, [&](const Word& c, const Word& w) {
      return std::lexicographical_compare(c.begin(), c.begin() + prefix, w.begin(), w.begin() + prefix);
    });
    if (it == centers.end() || !std::equal(it->begin(), it->begin() + prefix, a.word.begin()))
      throw InvalidArgument("atom outside every cover cylinder");
    mass[static_cast<std::size_t>(it - centers.begin())] += a.weight;
  }
  // Largest-remainder rounding to multiples of 1/grid.
  const BigInt scale(static_cast<unsigned long>(grid));
  std::vector<BigInt> units(centers.size());
  std::vector<Rational> remainder(centers.size());
  BigInt used = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    Rational scaled = mass[c] * scale;
    mpz_fdiv_q(units[c].get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    remainder[c] = scaled - Rational(units[c]);
    used += units[c];
  }
  std::vector<std::size_t> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  const std::size_t left = BigInt(scale - used).get_ui();
  for (std::size_t t = 0; t < left; ++t) units[order[t]] += 1;
  std::vector<Atom> atoms;
  for (std::size_t c = 0; c < centers.size(); ++c)
    if (units[c] > 0) {
      Rational w(units[c], scale);
      w.canonicalize();
      atoms.push_back({centers[c], std::move(w)});
    }
  return DiscreteMeasure(mu.system(), std::move(atoms));
}

BolleyCover bolley_cover(const SystemHandle& system, int n, const Rational& delta, int p,
                         std::size_t samples, std::uint64_t seed, int resolution) {
  const SymbolicSystem& sys = *system;
  const Rational diam = sys.diameter();
  if (delta <= 0 || delta >= diam) throw InvalidArgument("delta must lie in (0, diam X)");
  if (p < 1 || p > 3) throw InvalidArgument("p must be 1, 2 or 3");
  BolleyCover cover;
  cover.n = n;
  cover.p = p;
  cover.delta = delta;
  cover.center_resolution = ball_resolution(sys, n, delta / 2, CoverConvention::closed);
  cover.resolution = std::max({resolution, cover.center_resolution, n, 1});
  cover.centers = class_representatives(sys, cover.center_resolution, cover.resolution);
  const auto k = static_cast<unsigned long>(cover.centers.size());

  // grid = ceil(K 2^(p-1) D^p / delta^p)
  Rational need = Rational(static_cast<unsigned long>(k)) * pow(Rational(2), static_cast<unsigned>(p - 1)) *
                  pow(diam, static_cast<unsigned>(p)) / pow(delta, static_cast<unsigned>(p));
  BigInt grid;
  mpz_cdiv_q(grid.get_mpz_t(), need.get_num_mpz_t(), need.get_den_mpz_t());
  if (!grid.fits_ulong_p() || grid > BigInt(1) << 40) throw ResourceCap("weight grid too fine");
  cover.grid = grid.get_ui();
  cover.family_size = binomial(cover.grid + k - 1, k - 1);
  cover.log_family_size = log_of(cover.family_size);
  cover.log_bound = p * static_cast<double>(k) * std::log(8.0 * std::exp(1.0) * to_double(diam) / to_double(delta));
  cover.within_bound = cover.log_family_size <= cover.log_bound;

  std::mt19937_64 rng(seed);
  const Rational limit = pow(delta, static_cast<unsigned>(p));
  const int support = static_cast<int>(std::min<unsigned long>(2 * k, 24));
  for (std::size_t s = 0; s < samples; ++s) {
    DiscreteMeasure mu = random_measure(system, rng, support, cover.resolution);
    DiscreteMeasure near = cover.project(mu);
    ++cover.sampled;
    if (wasserstein(mu, near, p, BowenContext{n, MetricMode::bowen}).power_cost <= limit) ++cover.spanned;
  }
  return cover;
}

RecountResult recount_certificate(const Certificate& cert, unsigned workers) {
  RecountResult out;
  auto fail = [&](std::string message) {
    if (out.passed) {
      out.passed = false;
      out.first_failure = std::move(message);
    }
  };
  switch (cert.kind) {
    case CertificateKind::apart_measures: {
      auto found = apart_count(cert.measures, cert.n, cert.eps);
      out.compared = cert.measures.size();
      if (found.count != cert.measures.size())
        fail("apart_count keeps " + std::to_string(found.count) + " of " + std::to_string(cert.measures.size()));
      return out;
    }
    case CertificateKind::split_sets: {
      auto found = split_count(cert.sets, cert.n, cert.eps);
      out.compared = cert.sets.size();
      if (found.count != cert.sets.size())
        fail("split_count keeps " + std::to_string(found.count) + " of " + std::to_string(cert.sets.size()));
      return out;
    }
    default:
      break;
  }

  const bool measures = cert.kind == CertificateKind::separated_measures;
  const std::size_t members = measures ? cert.measures.size() : cert.sets.size();
  const BowenContext ctx{cert.n, MetricMode::bowen};
  auto metric = [&](std::size_t i, std::size_t j) -> Rational {
    if (measures) return wasserstein(cert.measures[i], cert.measures[j], 1, ctx).power_cost;
    return hausdorff(cert.sets[i], cert.sets[j], ctx);
  };
  SearchOptions search;
  search.restarts = 0;
  if (members <= 32) {
    auto table = DistanceTable::build(members, members, metric, true, workers);
    auto packing = packing_count(table, cert.eps, SeparationConvention::greater, search);
    out.compared = members;
    if (packing.count != members)
      fail("packing_count keeps " + std::to_string(packing.count) + " of " + std::to_string(members) + " witnesses");
    return out;
  }
  auto position = [&](const BigInt& index) {
    auto it = std::lower_bound(cert.member_index.begin(), cert.member_index.end(), index);
    if (it == cert.member_index.end() || *it != index) throw VerificationFailure("pair member missing");
    return static_cast<std::size_t>(it - cert.member_index.begin());
  };
  for (const auto& pair : cert.verification.pairs) {
    const std::size_t i = position(pair.first), j = position(pair.second);
    auto table = DistanceTable::build(2, 2, [&](std::size_t a, std::size_t b) {
      return a == b ? Rational(0) : metric(a == 0 ? i : j, b == 0 ? i : j);
    }, true, 1);
    auto packing = packing_count(table, cert.eps, SeparationConvention::greater, search);
    ++out.compared;
    if (packing.count != 2)
      fail("pair (" + to_string(pair.first) + ", " + to_string(pair.second) + ") is not separated: " +
           to_string(table.at(0, 1)));
  }
  return out;
}

}  // namespace emergence
