#pragma once

// Constructive lower-bound families with machine-checkable witnesses.
//
// Distances here are recomputed by routines private to this module (prefix
// scans, the ultrametric transport formula, a direct Hausdorff loop) so that a
// certificate and the counting module never share a distance code path.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emergence/codes.hpp"
#include "emergence/hyperspace.hpp"
#include "emergence/measures.hpp"

namespace emergence {

enum class CertificateKind { apart_measures, separated_measures, separated_sets, split_sets };

std::string to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(const std::string& text);

struct PairCheck {
  BigInt first;
  BigInt second;
  Rational distance;
  Rational bound;  // mass-defect lower bound for Hamming pairs, else 0
  bool ok = false;
};

struct VerificationRecord {
  bool sampled = false;
  std::uint64_t seed = 0;
  std::size_t pairs_checked = 0;  // may exceed pairs.size() for exhaustive checks
  std::vector<PairCheck> pairs;   // recorded pairs, re-checked by verify_certificate
  bool passed = false;
};

// Claims, by kind, for every pair of distinct members at horizon n:
//   apart_measures      min support d_n >= eps
//   separated_measures  W_1^n > eps
//   separated_sets      H^n > eps
//   split_sets          min cross d_n > eps
struct Certificate {
  CertificateKind kind = CertificateKind::apart_measures;
  SystemHandle system;
  int n = 1;
  Rational eps;
  BigInt family_size;

  // Generator: code_length == 0 means the members are the base family itself;
  // otherwise member k is built from codeword k of the half-weight code.
  std::size_t code_length = 0;
  std::vector<DiscreteMeasure> base_measures;
  std::vector<FiniteClosedSet> base_sets;
  // Base-family claim when a code is used: (n, base_eps) apart or split or separated points.
  Rational base_eps;

  std::vector<BigInt> member_index;
  std::vector<DiscreteMeasure> measures;
  std::vector<FiniteClosedSet> sets;

  VerificationRecord verification;
};

enum class ApartSource { dirac, periodic };

// Pairwise (n, eps)-apart measures. Dirac: one point per d_n-ball class.
// Periodic: separated words closed into periodic orbits (connector length n0
// for SFTs), orbit measures deduplicated, certified at horizon n + n0.
Certificate apart_measure_family(const SystemHandle& system, int n, const Rational& eps,
                                 ApartSource source = ApartSource::dirac);

struct SampleOptions {
  std::size_t full_check_limit = 16;  // families up to this size are checked on every pair
  std::size_t pairs = 50;
  std::uint64_t seed = 0;
};

// mu_phi = (2/N) sum phi(i) nu_i over the first N members of an apart base.
// Certified (n, rho/4)-separated under W_1^n, rho the base scale.
Certificate hamming_measure_family(const Certificate& base, std::size_t code_length,
                                   const SampleOptions& sample = {});

// Orbit sets of closed separated words: pairwise split, each f-fixed.
Certificate split_base_family(const SystemHandle& system, int n, const Rational& eps);

enum class SetDirection { separated, split };

// B_phi = {x_i : phi(i) = 1} over d_n-separated points (separated), or the
// union of split orbit sets (split, members are f-fixed). Certified H^n > eps.
Certificate hyperspace_family(const SystemHandle& system, int n, const Rational& eps,
                              std::size_t code_length, SetDirection direction,
                              const SampleOptions& sample = {});

// Member k of a coded family, regenerated from the generator.
DiscreteMeasure coded_measure(const Certificate& cert, const BigInt& index);
FiniteClosedSet coded_set(const Certificate& cert, const BigInt& index);

struct VerificationOutcome {
  bool passed = true;
  std::string first_failure;
  std::size_t pairs_checked = 0;
};

// Independent re-check: base family claim, members against the generator,
// recorded pair distances recomputed and compared with the claim.
VerificationOutcome verify_certificate(const Certificate& cert);

// Largest multiple of 8 not above `available`, capped.
std::size_t code_length_for(std::size_t available, std::size_t cap = 512);
// Multiple of 8 not above min(available, cap) whose code is largest (0 if none).
std::size_t best_code_length(std::size_t available, std::size_t cap = 512);

}  // namespace emergence
