#include "emergence/certificates.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "emergence/counting.hpp"

namespace emergence {

namespace {

constexpr std::size_t kRecordedPairCap = 256;

// d_n between equal-resolution words by a plain prefix scan.
Rational scan_distance(const SymbolicSystem& sys, const Word& a, const Word& b, int n) {
  if (a.size() != b.size()) throw InexactDistance("certificate words must share one resolution");
  auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin());
  if (ia == a.end()) return 0;
  const long j = ia - a.begin();
  const long e = j - n + 1;
  return sys.lambda_pow(static_cast<int>(e > 0 ? e : 0));
}

Rational min_cross(const SymbolicSystem& sys, const std::vector<Word>& a, const std::vector<Word>& b, int n) {
  Rational best = -1;
  for (const auto& x : a)
    for (const auto& y : b) {
      Rational d = scan_distance(sys, x, y, n);
      if (best < 0 || d < best) best = d;
    }
  return best;
}

std::vector<Word> support(const DiscreteMeasure& mu) {
  std::vector<Word> out;
  for (const auto& a : mu.atoms()) out.push_back(a.word);
  return out;
}

Rational direct_hausdorff(const SymbolicSystem& sys, const FiniteClosedSet& b, const FiniteClosedSet& c, int n) {
  Rational worst = 0;
  auto directed = [&](const FiniteClosedSet& from, const FiniteClosedSet& to) {
    for (const auto& x : from.points()) worst = std::max(worst, min_cross(sys, {x}, to.points(), n));
  };
  directed(b, c);
  directed(c, b);
  return worst;
}

BigInt random_below(const BigInt& bound, std::mt19937_64& rng) {
  const std::size_t chunks = mpz_sizeinbase(bound.get_mpz_t(), 2) / 64 + 2;
  BigInt r = 0;
  for (std::size_t i = 0; i < chunks; ++i) {
    r <<= 64;
    r += BigInt(static_cast<unsigned long>(rng()));
  }
  return BigInt(r % bound);
}

std::vector<std::pair<BigInt, BigInt>> choose_pairs(const BigInt& size, const SampleOptions& sample, bool& sampled) {
  std::vector<std::pair<BigInt, BigInt>> pairs;
  if (size < 2) return pairs;
  if (size <= BigInt(static_cast<unsigned long>(sample.full_check_limit))) {
    sampled = false;
    const unsigned long s = size.get_ui();
    for (unsigned long i = 0; i < s; ++i)
      for (unsigned long j = i + 1; j < s; ++j) pairs.emplace_back(BigInt(i), BigInt(j));
    return pairs;
  }
  sampled = true;
  std::mt19937_64 rng(sample.seed);
  while (pairs.size() < sample.pairs) {
    BigInt a = random_below(size, rng), b = random_below(size, rng);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    pairs.emplace_back(a, b);
  }
  return pairs;
}

// Cycle through each word: w followed by a connector back to its first symbol.
// Returns distinct orbits (canonical rotations) in lexicographic order.
std::vector<Word> close_words(const SymbolicSystem& sys, const std::vector<Word>& words, int& n0) {
  if (sys.is_full_shift()) {
    n0 = 0;
  } else {
    auto k = sys.primitivity_exponent();
    if (!k) throw InvalidArgument("subshift is not mixing; no uniform connector length");
    n0 = *k - 1;
  }
  std::set<Word> orbits;
  for (const auto& w : words) {
    Word cycle = w;
    auto bridge = sys.connector(w.back(), w.front(), n0 + 1);
    if (!bridge) throw Error("no connector of length " + std::to_string(n0) + " for " + word_to_string(w));
    cycle.insert(cycle.end(), bridge->begin(), bridge->end());
    orbits.insert(canonical_rotation(cycle));
  }
  return {orbits.begin(), orbits.end()};
}

bool claim_holds(CertificateKind kind, const Rational& d, const Rational& eps) {
  return kind == CertificateKind::apart_measures ? d >= eps : d > eps;
}

// Exhaustive pairwise check of a family given as a distance callback.
template <class Distance>
void check_all_pairs(std::size_t size, CertificateKind kind, const Rational& eps, Distance distance,
                     VerificationRecord& record) {
  record.passed = true;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) {
      Rational d = distance(i, j);
      const bool ok = claim_holds(kind, d, eps);
      ++record.pairs_checked;
      if (record.pairs.size() < kRecordedPairCap || !ok)
        record.pairs.push_back({BigInt(static_cast<unsigned long>(i)), BigInt(static_cast<unsigned long>(j)), d, 0, ok});
      record.passed = record.passed && ok;
    }
}

std::size_t find_member(const Certificate& cert, const BigInt& index) {
  auto it = std::lower_bound(cert.member_index.begin(), cert.member_index.end(), index);
  if (it == cert.member_index.end() || *it != index)
    throw VerificationFailure("member " + to_string(index) + " is referenced but not included");
  return static_cast<std::size_t>(it - cert.member_index.begin());
}

}  // namespace

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::apart_measures: return "apart_measures";
    case CertificateKind::separated_measures: return "separated_measures";
    case CertificateKind::separated_sets: return "separated_sets";
    case CertificateKind::split_sets: return "split_sets";
  }
  return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& text) {
  for (auto k : {CertificateKind::apart_measures, CertificateKind::separated_measures,
                 CertificateKind::separated_sets, CertificateKind::split_sets})
    if (to_string(k) == text) return k;
  throw InvalidArgument("unknown certificate kind '" + text + "'");
}

std::size_t code_length_for(std::size_t available, std::size_t cap) {
  return std::min(available, cap) / 8 * 8;
}

std::size_t best_code_length(std::size_t available, std::size_t cap) {
  std::size_t best = 0;
  for (std::size_t n = 8; n <= std::min(available, cap); n += 8)
    if (best == 0 || HalfWeightCode::shared(n).size() > HalfWeightCode::shared(best).size()) best = n;
  return best;
}

Certificate apart_measure_family(const SystemHandle& system, int n, const Rational& eps, ApartSource source) {
  const SymbolicSystem& sys = *system;
  Certificate cert;
  cert.kind = CertificateKind::apart_measures;
  cert.system = system;
  cert.eps = eps;
  const int prefix = std::max(ball_resolution(sys, n, eps, CoverConvention::open), 1);
  std::vector<Word> words = class_representatives(sys, prefix, prefix);
  if (source == ApartSource::dirac) {
    cert.n = n;
    for (auto& w : words) cert.measures.push_back(DiscreteMeasure::dirac(system, std::move(w)));
  } else {
    int n0 = 0;
    auto orbits = close_words(sys, words, n0);
    cert.n = n + n0;
    const int period = prefix + n0;
    for (const auto& cycle : orbits) cert.measures.push_back(periodic_orbit_measure(system, cycle, period));
  }
  cert.family_size = BigInt(static_cast<unsigned long>(cert.measures.size()));
  for (std::size_t i = 0; i < cert.measures.size(); ++i) cert.member_index.emplace_back(static_cast<unsigned long>(i));

  std::vector<std::vector<Word>> supports;
  for (const auto& m : cert.measures) supports.push_back(support(m));
  check_all_pairs(cert.measures.size(), cert.kind, eps,
                  [&](std::size_t i, std::size_t j) { return min_cross(sys, supports[i], supports[j], cert.n); },
                  cert.verification);
  if (!cert.verification.passed) throw VerificationFailure("apart family failed its own check");
  return cert;
}

DiscreteMeasure coded_measure(const Certificate& cert, const BigInt& index) {
  const HalfWeightCode& code = HalfWeightCode::shared(cert.code_length);
  const Codeword word = code.codeword(index);
  Rational scale(2, static_cast<unsigned long>(cert.code_length));
  scale.canonicalize();
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < cert.code_length; ++i)
    if (bit(word, i))
      for (const auto& a : cert.base_measures[i].atoms()) atoms.push_back({a.word, a.weight * scale});
  return DiscreteMeasure(cert.system, std::move(atoms));
}

FiniteClosedSet coded_set(const Certificate& cert, const BigInt& index) {
  const HalfWeightCode& code = HalfWeightCode::shared(cert.code_length);
  const Codeword word = code.codeword(index);
  std::vector<Word> points;
  for (std::size_t i = 0; i < cert.code_length; ++i)
    if (bit(word, i))
      for (const auto& p : cert.base_sets[i].points()) points.push_back(p);
  return FiniteClosedSet(cert.system, std::move(points));
}

Certificate hamming_measure_family(const Certificate& base, std::size_t code_length, const SampleOptions& sample) {
  if (base.kind != CertificateKind::apart_measures) throw InvalidArgument("base must be an apart family");
  if (code_length == 0 || code_length % 8) throw InvalidArgument("code length must be a positive multiple of 8");
  if (base.measures.size() < code_length)
    throw InvalidArgument("apart base has " + std::to_string(base.measures.size()) + " members, code needs " +
                          std::to_string(code_length));
  const HalfWeightCode& code = HalfWeightCode::shared(code_length);

  Certificate cert;
  cert.kind = CertificateKind::separated_measures;
  cert.system = base.system;
  cert.n = base.n;
  cert.base_eps = base.eps;
  cert.eps = base.eps / 4;
  cert.code_length = code_length;
  cert.base_measures.assign(base.measures.begin(), base.measures.begin() + static_cast<long>(code_length));
  cert.family_size = code.size();

  auto pairs = choose_pairs(cert.family_size, sample, cert.verification.sampled);
  cert.verification.seed = sample.seed;
  std::set<BigInt> indices;
  for (const auto& [a, b] : pairs) {
    indices.insert(a);
    indices.insert(b);
  }
  cert.member_index.assign(indices.begin(), indices.end());
  for (const auto& idx : cert.member_index) cert.measures.push_back(coded_measure(cert, idx));

  cert.verification.passed = true;
  const Rational n_len(static_cast<unsigned long>(code_length));
  for (const auto& [a, b] : pairs) {
    const auto& mu = cert.measures[find_member(cert, a)];
    const auto& nu = cert.measures[find_member(cert, b)];
    Rational w = ultrametric_w1(mu, nu, cert.n);
    const std::size_t hamm = hamming_distance(code.codeword(a), code.codeword(b));
    Rational bound = cert.base_eps * Rational(static_cast<unsigned long>(hamm)) / n_len;
    const bool ok = bound <= w && w > cert.eps;
    cert.verification.pairs.push_back({a, b, w, bound, ok});
    ++cert.verification.pairs_checked;
    cert.verification.passed = cert.verification.passed && ok;
  }
  if (!cert.verification.passed) throw VerificationFailure("Hamming family failed its own check");
  return cert;
}

Certificate split_base_family(const SystemHandle& system, int n, const Rational& eps) {
  const SymbolicSystem& sys = *system;
  const int prefix = std::max(ball_resolution(sys, n, eps, CoverConvention::closed), 1);
  std::vector<Word> words = class_representatives(sys, prefix, prefix);
  int n0 = 0;
  auto orbits = close_words(sys, words, n0);
  Certificate cert;
  cert.kind = CertificateKind::split_sets;
  cert.system = system;
  cert.n = n + n0;
  cert.eps = eps;
  for (const auto& cycle : orbits) cert.sets.push_back(periodic_fixed_set(system, {cycle}, prefix + n0));
  cert.family_size = BigInt(static_cast<unsigned long>(cert.sets.size()));
  for (std::size_t i = 0; i < cert.sets.size(); ++i) cert.member_index.emplace_back(static_cast<unsigned long>(i));
  check_all_pairs(cert.sets.size(), cert.kind, eps,
                  [&](std::size_t i, std::size_t j) {
                    return min_cross(sys, cert.sets[i].points(), cert.sets[j].points(), cert.n);
                  },
                  cert.verification);
  if (!cert.verification.passed) throw VerificationFailure("split family failed its own check");
  return cert;
}

Certificate hyperspace_family(const SystemHandle& system, int n, const Rational& eps, std::size_t code_length,
                              SetDirection direction, const SampleOptions& sample) {
  const SymbolicSystem& sys = *system;
  if (code_length == 0 || code_length % 8) throw InvalidArgument("code length must be a positive multiple of 8");
  Certificate cert;
  cert.kind = CertificateKind::separated_sets;
  cert.system = system;
  cert.eps = eps;
  cert.base_eps = eps;
  cert.code_length = code_length;
  if (direction == SetDirection::separated) {
    const int prefix = std::max(ball_resolution(sys, n, eps, CoverConvention::closed), 1);
    cert.n = n;
    for (auto& w : class_representatives(sys, prefix, prefix))
      cert.base_sets.emplace_back(system, std::vector<Word>{std::move(w)});
  } else {
    Certificate base = split_base_family(system, n, eps);
    cert.n = base.n;
    cert.base_sets = std::move(base.sets);
  }
  if (cert.base_sets.size() < code_length)
    throw InvalidArgument("base has " + std::to_string(cert.base_sets.size()) + " members, code needs " +
                          std::to_string(code_length));
  cert.base_sets.resize(code_length, cert.base_sets.front());
  const HalfWeightCode& code = HalfWeightCode::shared(code_length);
  cert.family_size = code.size();

  auto pairs = choose_pairs(cert.family_size, sample, cert.verification.sampled);
  cert.verification.seed = sample.seed;
  std::set<BigInt> indices;
  for (const auto& [a, b] : pairs) {
    indices.insert(a);
    indices.insert(b);
  }
  cert.member_index.assign(indices.begin(), indices.end());
  for (const auto& idx : cert.member_index) cert.sets.push_back(coded_set(cert, idx));

  cert.verification.passed = true;
  for (const auto& [a, b] : pairs) {
    Rational h = direct_hausdorff(sys, cert.sets[find_member(cert, a)], cert.sets[find_member(cert, b)], cert.n);
    const bool ok = h > eps;
    cert.verification.pairs.push_back({a, b, h, 0, ok});
    ++cert.verification.pairs_checked;
    cert.verification.passed = cert.verification.passed && ok;
  }
  if (!cert.verification.passed) throw VerificationFailure("hyperspace family failed its own check");
  return cert;
}

VerificationOutcome verify_certificate(const Certificate& cert) {
  VerificationOutcome out;
  auto fail = [&](std::string message) {
    if (out.passed) {
      out.passed = false;
      out.first_failure = std::move(message);
    }
  };
  try {
    const SymbolicSystem& sys = *cert.system;
    const bool measure_kind =
        cert.kind == CertificateKind::apart_measures || cert.kind == CertificateKind::separated_measures;
    const std::size_t members = measure_kind ? cert.measures.size() : cert.sets.size();
    if (members != cert.member_index.size()) fail("member index list does not match the witnesses");
    if (!std::is_sorted(cert.member_index.begin(), cert.member_index.end()))
      fail("member indices are not sorted");

    auto distance = [&](std::size_t i, std::size_t j) -> Rational {
      switch (cert.kind) {
        case CertificateKind::apart_measures:
          return min_cross(sys, support(cert.measures[i]), support(cert.measures[j]), cert.n);
        case CertificateKind::separated_measures:
          return ultrametric_w1(cert.measures[i], cert.measures[j], cert.n);
        case CertificateKind::separated_sets:
          return direct_hausdorff(sys, cert.sets[i], cert.sets[j], cert.n);
        case CertificateKind::split_sets:
          return min_cross(sys, cert.sets[i].points(), cert.sets[j].points(), cert.n);
      }
      return 0;
    };

    const HalfWeightCode* code = nullptr;
    if (cert.code_length == 0) {
      if (cert.family_size != BigInt(static_cast<unsigned long>(members)))
        fail("family size " + to_string(cert.family_size) + " differs from " + std::to_string(members) + " witnesses");
      for (std::size_t i = 0; i < members && out.passed; ++i) {
        if (cert.member_index[i] != BigInt(static_cast<unsigned long>(i))) fail("member indices must be 0..size-1");
        for (std::size_t j = i + 1; j < members && out.passed; ++j) {
          Rational d = distance(i, j);
          ++out.pairs_checked;
          if (!claim_holds(cert.kind, d, cert.eps))
            fail("pair (" + std::to_string(i) + ", " + std::to_string(j) + "): distance " + to_string(d) +
                 " violates the claim at eps " + to_string(cert.eps));
        }
      }
    } else {
      code = &HalfWeightCode::shared(cert.code_length);
      if (code->size() != cert.family_size)
        fail("family size " + to_string(cert.family_size) + " differs from code size " + to_string(code->size()));
      // Base family claim.
      const std::size_t base = measure_kind ? cert.base_measures.size() : cert.base_sets.size();
      if (base != cert.code_length) fail("base family size differs from the code length");
      for (std::size_t i = 0; i < base && out.passed; ++i)
        for (std::size_t j = i + 1; j < base && out.passed; ++j) {
          Rational d = measure_kind ? min_cross(sys, support(cert.base_measures[i]), support(cert.base_measures[j]), cert.n)
                                    : min_cross(sys, cert.base_sets[i].points(), cert.base_sets[j].points(), cert.n);
          const bool ok = measure_kind ? d >= cert.base_eps : d > cert.base_eps;
          if (!ok) fail("base pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is too close: " + to_string(d));
        }
      // Witnesses against the generator.
      for (std::size_t k = 0; k < members && out.passed; ++k) {
        const BigInt& idx = cert.member_index[k];
        const bool same = measure_kind ? coded_measure(cert, idx) == cert.measures[k]
                                       : coded_set(cert, idx) == cert.sets[k];
        if (!same) fail("witness " + std::to_string(k) + " (member " + to_string(idx) + ") differs from the regenerated member");
      }
    }

    // Recorded pairs.
    for (const auto& pair : cert.verification.pairs) {
      if (!out.passed) break;
      const std::size_t i = find_member(cert, pair.first), j = find_member(cert, pair.second);
      Rational d = distance(i, j);
      ++out.pairs_checked;
      const std::string label = "pair (" + to_string(pair.first) + ", " + to_string(pair.second) + ")";
      if (d != pair.distance) {
        fail(label + ": recorded distance " + to_string(pair.distance) + " but recomputed " + to_string(d));
        break;
      }
      if (!claim_holds(cert.kind, d, cert.eps)) fail(label + ": distance " + to_string(d) + " violates the claim");
      if (cert.kind == CertificateKind::separated_measures) {
        const std::size_t hamm = hamming_distance(code->codeword(pair.first), code->codeword(pair.second));
        Rational bound = cert.base_eps * Rational(static_cast<unsigned long>(hamm)) /
                         Rational(static_cast<unsigned long>(cert.code_length));
        if (bound != pair.bound) fail(label + ": recorded mass-defect bound " + to_string(pair.bound) + " is wrong");
        else if (bound > d) fail(label + ": transport cost below the mass-defect bound");
      }
    }
    if (!cert.verification.passed) fail("certificate records a failed verification");
  } catch (const Error& e) {
    fail(e.what());
  }
  return out;
}

}  // namespace emergence
