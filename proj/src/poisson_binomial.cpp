#include "bbone/poisson_binomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace bbone {

BernoulliParams pair_params(const ProbabilityMatrix& q, std::size_t i, std::size_t j) {
  if (i == j)
    throw std::invalid_argument("pair_params: self-pairs are never tested");
  if (i >= q.values.rows() || j >= q.values.rows())
    throw std::out_of_range("pair_params: agent index out of range");
  BernoulliParams params;
  params.probs.resize(q.values.cols());
  for (std::size_t k = 0; k < q.values.cols(); ++k)
    params.probs[k] = q.values(i, k) * q.values(j, k);
  return params;
}

double upper_tail(const BernoulliParams& params, int t) {
  for (double p : params.probs)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("upper_tail: probabilities must lie in [0,1]");

  if (t <= 0) return 1.0;
  if (static_cast<std::size_t>(t) > params.probs.size()) return 0.0;

  // Certain successes shift the threshold; impossible ones are skipped.
  long certain = 0;
  std::vector<double> active;
  active.reserve(params.probs.size());
  for (double p : params.probs) {
    if (p == 1.0)
      ++certain;
    else if (p > 0.0)
      active.push_back(p);
  }
  const long need = static_cast<long>(t) - certain;
  if (need <= 0) return 1.0;
  if (need > static_cast<long>(active.size())) return 0.0;

  // dist[m] = Pr(m successes so far) for m < need; dist[need] absorbs
  // Pr(at least `need`), so the tail accumulates additively and no
  // subtraction ever occurs.
  std::vector<double> dist(static_cast<std::size_t>(need) + 1, 0.0);
  dist[0] = 1.0;
  long filled = 0;
  for (const double p : active) {
    const double miss = 1.0 - p;
    if (filled + 1 >= need) dist[need] += dist[need - 1] * p;
    for (long m = std::min(filled + 1, need - 1); m >= 1; --m)
      dist[m] = dist[m] * miss + dist[m - 1] * p;
    dist[0] *= miss;
    ++filled;
  }
  return std::clamp(dist[need], 0.0, 1.0);
}

}  // namespace bbone
