#pragma once

// Quantization of finite measure ensembles, measure emergence, pointwise emergence.

#include <optional>
#include <vector>

#include "emergence/estimators.hpp"

namespace emergence {

struct EnsembleAtom {
  DiscreteMeasure measure;
  Rational weight;
};

// Finite probability measure on M(X). Equal measures are merged.
class MeasureEnsemble {
 public:
  explicit MeasureEnsemble(std::vector<EnsembleAtom> atoms);
  static MeasureEnsemble single(const DiscreteMeasure& mu);
  static MeasureEnsemble uniform(const std::vector<DiscreteMeasure>& measures);

  const std::vector<EnsembleAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const SystemHandle& system() const { return atoms_.front().measure.system(); }
  // Barycenter: the measure whose decomposition this ensemble is.
  DiscreteMeasure barycenter() const;

 private:
  std::vector<EnsembleAtom> atoms_;
};

struct QuantizationOptions {
  int grid_steps = 4;                    // simplex grid resolution for mixtures
  std::size_t exact_max = 3;             // codebooks up to this size are searched exhaustively
  std::size_t candidate_cap = 400;
  std::optional<std::vector<DiscreteMeasure>> candidates;  // replaces the generated set
  std::optional<std::vector<DiscreteMeasure>> spanning;    // family checked as a codebook
  unsigned workers = 0;
};

struct QuantizationResult {
  std::size_t q = 0;       // size of the best codebook found (upper bound)
  std::size_t lower = 1;   // pairwise-separation lower bound
  bool exact = false;      // q is minimal over all codebooks (q == lower)
  bool exhaustive = false; // q is minimal over codebooks drawn from the candidates
  std::vector<DiscreteMeasure> codebook;
  Rational cost;           // sum_k w_k min_c W_1^n(mu_k, c)
  std::size_t candidates = 0;
  std::optional<std::size_t> spanning_size;  // |family| when it is a valid codebook
};

// Atoms and their barycentric mixtures on the simplex grid (pairwise when the
// full grid is too large), deduplicated.
std::vector<DiscreteMeasure> mixture_candidates(const std::vector<DiscreteMeasure>& measures, int grid_steps,
                                                std::size_t cap);

// sum_k w_k min_{c in codebook} W_1^n(mu_k, c).
Rational codebook_cost(const MeasureEnsemble& ensemble, const std::vector<DiscreteMeasure>& codebook, int n);

// Smallest N with (s/2) * (sum of the c - N smallest weights) <= eps, where s
// is the least pairwise W_1^n between distinct atoms.
std::size_t quantization_lower_bound(const MeasureEnsemble& ensemble, int n, const Rational& eps);

// Q(omega, n, eps): minimal codebook F with sum_k w_k W_1^n(mu_k, F) <= eps.
// Exhaustive over candidates for sizes up to exact_max, greedy beyond.
QuantizationResult quantization(const MeasureEnsemble& ensemble, int n, const Rational& eps,
                                const QuantizationOptions& options = {});

// f_* mu == mu at the common resolution (atoms of length L compared at L - 1).
bool is_invariant(const DiscreteMeasure& mu);

// E_mu(n, eps) = Q(omega, n, eps) over the grid, omega the given decomposition.
// Rejects non-invariant atoms.
ScalingReport measure_emergence(const MeasureEnsemble& decomposition, const IntRange& n_range,
                                const std::vector<Rational>& eps_grid, const QuantizationOptions& options = {});

struct PointwiseResult {
  std::size_t count = 0;  // covering number of V(x)
  std::vector<DiscreteMeasure> centers;
  bool exact = false;
};

// E_x(n, eps) = N_M(V(x), n, eps): closed W_1^n cover of vx by vx and its mixtures.
// n = 0 selects the static W_1.
PointwiseResult pointwise_emergence(const std::vector<DiscreteMeasure>& vx, int n, const Rational& eps,
                                    const QuantizationOptions& options = {});

}  // namespace emergence
