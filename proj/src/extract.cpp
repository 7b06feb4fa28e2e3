#include "bbone/extract.hpp"

#include <cmath>
#include <stdexcept>

namespace bbone {

Matrix<double> significance_matrix(const IncidenceMatrix& b, const ProbabilityMatrix& q,
                                   const ExtractOptions& options) {
  if (q.values.rows() != b.agents() || q.values.cols() != b.artifacts())
    throw std::invalid_argument("significance_matrix: Q dimensions do not match incidence matrix");

  const std::size_t r = b.agents();
  const Projection p = project(b);
  Matrix<double> pvalues(r, r, 1.0);  // diagonal stays 1: self-pairs untested
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      const int weight = p.weights(i, j);
      double pv;
      if (options.skip_zero_pairs && weight == 0)
        pv = 1.0;  // Pr(X >= 0) without building the parameter vector
      else
        pv = upper_tail(pair_params(q, i, j), weight);
      pvalues(i, j) = pv;
      pvalues(j, i) = pv;
    }
  }
  return pvalues;
}

Backbone extract_backbone(const IncidenceMatrix& b, const ConstraintMask& mask, double alpha,
                          NullModel model, const ExtractOptions& options, FitResult* fit_out) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("extract_backbone: alpha must lie strictly inside (0,1)");

  // The sdsm null ignores edge constraints entirely: the regression is fit
  // over every cell as if all were free.
  const ConstraintMask effective =
      model == NullModel::Sdsm ? ConstraintMask::all_free(b.agents(), b.artifacts()) : mask;

  const ProbabilityMatrix q = estimate_q(b, effective, fit_out);
  Matrix<double> pvalues = significance_matrix(b, q, options);

  const std::size_t r = b.agents();
  const double threshold = alpha / 2.0;
  Matrix<std::uint8_t> adjacency(r, r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (pvalues(i, j) < threshold) {
        adjacency(i, j) = 1;
        adjacency(j, i) = 1;
      }

  return Backbone{b.agent_labels(), std::move(adjacency), std::move(pvalues), alpha, model};
}

}  // namespace bbone
