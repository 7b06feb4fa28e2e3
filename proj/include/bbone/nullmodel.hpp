#pragma once

#include <string>

#include "bbone/bipartite.hpp"

namespace bbone {

enum class NullModel { Sdsm, SdsmEc };

std::string to_string(NullModel m);

/// Per-cell Bernoulli parameters of the canonical ensemble: Q(i,k) is the
/// probability that an ensemble member has a 1 at (i,k). Exactly 0 at
/// prohibited cells and exactly 1 at required cells.
struct ProbabilityMatrix {
  Matrix<double> values;
  NullModel provenance = NullModel::Sdsm;
};

/// Maximum-likelihood fit of cell occupancy on (1, row margin, col margin).
struct FitResult {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  bool converged = false;
  int iterations = 0;
  /// All free-cell responses identical; the fit collapses to that constant.
  bool degenerate = false;
  double degenerate_value = 0.0;
};

/// Fits the Bernoulli log-likelihood of B over free cells only, with
/// predictors (1, r_i, c_k) taken from the observed margins of B (margins
/// include contributions from constrained cells). Constrained cells --
/// prohibited and required alike -- are excluded from the fit set.
///
/// Damped Newton iteration on the 3-parameter problem: converges when the
/// largest coefficient change drops below 1e-10 or every score residual below
/// 1e-12, capped at 100 iterations. Complete separation is reported through
/// converged=false with fitted probabilities clamped to [1e-12, 1-1e-12].
///
/// Throws std::invalid_argument when dimensions mismatch or no free cell
/// exists.
FitResult fit_logistic(const IncidenceMatrix& b, const ConstraintMask& mask);

/// Evaluates the fitted cell probabilities for the given margins: free cells
/// get logistic(beta0 + beta1*r_i + beta2*c_k), prohibited cells exactly 0,
/// required cells exactly 1.
ProbabilityMatrix predict_q(const FitResult& fit, const DegreeSequence& row_margins,
                            const DegreeSequence& col_margins, const ConstraintMask& mask);

/// Composition of fit_logistic and predict_q on B's own margins. Requires
/// validate(b, mask) to pass. When fit_out is non-null the fit diagnostics
/// (convergence, iterations, coefficients) are stored there.
ProbabilityMatrix estimate_q(const IncidenceMatrix& b, const ConstraintMask& mask,
                             FitResult* fit_out = nullptr);

}  // namespace bbone
