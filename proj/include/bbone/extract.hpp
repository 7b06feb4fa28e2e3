#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbone/nullmodel.hpp"
#include "bbone/poisson_binomial.hpp"

namespace bbone {

/// Binary backbone of a projection: adjacency(i,j) = 1 iff the upper-tail
/// p-value of the observed co-occurrence weight is strictly below alpha/2.
/// The p-value matrix is symmetric; diagonal entries are fixed at 1 because
/// self-pairs are never tested.
struct Backbone {
  std::vector<std::string> agent_labels;
  Matrix<std::uint8_t> adjacency;
  Matrix<double> pvalues;
  double alpha = 0.0;
  NullModel model = NullModel::Sdsm;
};

struct ExtractOptions {
  /// Skip pair-parameter construction for zero-weight pairs; their p-value is
  /// 1 either way, this only saves the O(c) product pass.
  bool skip_zero_pairs = false;
};

/// Upper-tail p-value for every unordered agent pair: entry (i,j) is
/// Pr(X >= P_ij) for X the null co-occurrence count of the pair under Q.
/// Symmetric by construction; diagonal fixed at 1.
Matrix<double> significance_matrix(const IncidenceMatrix& b, const ProbabilityMatrix& q,
                                   const ExtractOptions& options = {});

/// End-to-end extraction. For model sdsm the mask is ignored (the null is fit
/// over every cell); for sdsm-ec the incidence matrix must satisfy the mask.
/// alpha must lie strictly inside (0,1). Pairs are evaluated in a fixed order
/// so results are deterministic. When fit_out is non-null the regression
/// diagnostics are stored there.
Backbone extract_backbone(const IncidenceMatrix& b, const ConstraintMask& mask, double alpha,
                          NullModel model, const ExtractOptions& options = {},
                          FitResult* fit_out = nullptr);

}  // namespace bbone
