#pragma once

#include <cstddef>
#include <vector>

#include "bbone/nullmodel.hpp"

namespace bbone {

/// Success probabilities of the independent Bernoulli summands of one
/// projected edge weight: entry k is Q(i,k) * Q(j,k) for the agent pair (i,j).
struct BernoulliParams {
  std::vector<double> probs;
};

/// Per-artifact success probabilities for the pair (i, j). Self-pairs are
/// never tested: i == j throws std::invalid_argument.
BernoulliParams pair_params(const ProbabilityMatrix& q, std::size_t i, std::size_t j);

/// Exact Pr(X >= t) for X the sum of independent Bernoulli(probs[k]) draws.
///
/// Dynamic-programming convolution with an absorbing top state, O(n*t) time
/// and O(t) space; only non-negative additions, so there is no cancellation.
/// Entries exactly 1 shift the threshold down, entries exactly 0 are skipped.
/// t <= 0 returns 1; t greater than the number of entries returns 0.
double upper_tail(const BernoulliParams& params, int t);

}  // namespace bbone
