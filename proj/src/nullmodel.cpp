#include "bbone/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bbone {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kCoefTol = 1e-10;
constexpr double kScoreTol = 1e-12;
constexpr double kProbFloor = 1e-12;
constexpr double kProbCeil = 1.0 - 1e-12;

double sigmoid(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Free cells grouped by their (row margin, column margin) predictor pair.
// The likelihood depends on the data only through these group counts, so the
// fit is exactly invariant under row/column permutations and identical for
// every matrix sharing margins and constrained-cell totals.
struct CellGroup {
  double r = 0.0;  // row margin predictor
  double c = 0.0;  // column margin predictor
  double n = 0.0;  // free cells in the group
  double s = 0.0;  // of which carry a 1
};

std::vector<CellGroup> group_free_cells(const IncidenceMatrix& b, const ConstraintMask& mask,
                                        const DegreeSequence& rows, const DegreeSequence& cols) {
  std::map<std::pair<int, int>, std::pair<double, double>> acc;
  for (std::size_t i = 0; i < b.agents(); ++i) {
    for (std::size_t k = 0; k < b.artifacts(); ++k) {
      if (mask(i, k) != CellState::Free) continue;
      auto& entry = acc[{rows[i], cols[k]}];
      entry.first += 1.0;
      entry.second += b(i, k);
    }
  }
  std::vector<CellGroup> groups;
  groups.reserve(acc.size());
  for (const auto& [key, counts] : acc)
    groups.push_back({static_cast<double>(key.first), static_cast<double>(key.second),
                      counts.first, counts.second});
  return groups;
}

double log_likelihood(const std::vector<CellGroup>& groups, const double beta[3]) {
  double ll = 0.0;
  for (const auto& g : groups) {
    const double eta = beta[0] + beta[1] * g.r + beta[2] * g.c;
    // log(1 + e^eta), computed on the side that cannot overflow
    const double softplus =
        eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
    ll += g.s * eta - g.n * softplus;
  }
  return ll;
}

// Solves the 3x3 symmetric system H*delta = g by Gaussian elimination with
// partial pivoting. Near-zero pivots mark redundant directions (collinear
// predictors, e.g. constant margins); their delta component is set to 0 so
// the step degrades to the well-posed subproblem.
void solve3(double h[3][3], double g[3], double delta[3]) {
  int perm[3] = {0, 1, 2};
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) scale = std::max(scale, std::abs(h[i][j]));
  const double tiny = scale > 0.0 ? scale * 1e-13 : 1.0;

  bool dropped[3] = {false, false, false};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(h[perm[row]][col]) > std::abs(h[perm[pivot]][col])) pivot = row;
    std::swap(perm[col], perm[pivot]);
    const double p = h[perm[col]][col];
    if (std::abs(p) <= tiny) {
      dropped[col] = true;
      continue;
    }
    for (int row = col + 1; row < 3; ++row) {
      const double factor = h[perm[row]][col] / p;
      for (int j = col; j < 3; ++j) h[perm[row]][j] -= factor * h[perm[col]][j];
      g[perm[row]] -= factor * g[perm[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    if (dropped[col]) {
      delta[col] = 0.0;
      continue;
    }
    double v = g[perm[col]];
    for (int j = col + 1; j < 3; ++j) v -= h[perm[col]][j] * delta[j];
    delta[col] = v / h[perm[col]][col];
  }
}

}  // namespace

std::string to_string(NullModel m) {
  return m == NullModel::Sdsm ? "sdsm" : "sdsm-ec";
}

FitResult fit_logistic(const IncidenceMatrix& b, const ConstraintMask& mask) {
  if (mask.rows() != b.agents() || mask.cols() != b.artifacts())
    throw std::invalid_argument("constraint mask dimensions do not match incidence matrix");

  const DegreeSequence rows = row_sums(b);
  const DegreeSequence cols = col_sums(b);
  const std::vector<CellGroup> groups = group_free_cells(b, mask, rows, cols);
  if (groups.empty())
    throw std::invalid_argument("fit_logistic: no free cells to fit over");

  double total = 0.0, successes = 0.0;
  for (const auto& g : groups) {
    total += g.n;
    successes += g.s;
  }

  FitResult fit;
  if (successes == 0.0 || successes == total) {
    // All free responses identical; the MLE sits at an infinite intercept and
    // the fitted probability is exactly the common response.
    fit.degenerate = true;
    fit.degenerate_value = successes == 0.0 ? 0.0 : 1.0;
    fit.beta0 = successes == 0.0 ? -std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::infinity();
    fit.converged = true;
    return fit;
  }

  double beta[3] = {std::log(successes / (total - successes)), 0.0, 0.0};
  double ll = log_likelihood(groups, beta);
  bool converged = false;
  int updates = 0;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double score[3] = {0.0, 0.0, 0.0};
    double hess[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (const auto& g : groups) {
      const double mu = sigmoid(beta[0] + beta[1] * g.r + beta[2] * g.c);
      const double resid = g.s - g.n * mu;
      const double w = g.n * mu * (1.0 - mu);
      const double x[3] = {1.0, g.r, g.c};
      for (int a = 0; a < 3; ++a) {
        score[a] += resid * x[a];
        for (int z = a; z < 3; ++z) hess[a][z] += w * x[a] * x[z];
      }
    }
    hess[1][0] = hess[0][1];
    hess[2][0] = hess[0][2];
    hess[2][1] = hess[1][2];

    if (std::max({std::abs(score[0]), std::abs(score[1]), std::abs(score[2])}) < kScoreTol) {
      converged = true;
      break;
    }

    double delta[3];
    solve3(hess, score, delta);

    // Step-halving keeps the likelihood non-decreasing.
    double step = 1.0;
    double cand[3];
    double cand_ll = -std::numeric_limits<double>::infinity();
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      for (int a = 0; a < 3; ++a) cand[a] = beta[a] + step * delta[a];
      cand_ll = log_likelihood(groups, cand);
      if (cand_ll >= ll - 1e-12) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;  // likelihood flat in every tried direction

    const double change = std::max({std::abs(step * delta[0]), std::abs(step * delta[1]),
                                    std::abs(step * delta[2])});
    for (int a = 0; a < 3; ++a) beta[a] = cand[a];
    ll = cand_ll;
    ++updates;
    if (change < kCoefTol) {
      converged = true;
      break;
    }
  }

  // Separation pushes fitted probabilities onto the clamp bounds; report that
  // as non-convergence so callers see the estimates are boundary values.
  for (const auto& g : groups) {
    const double mu = sigmoid(beta[0] + beta[1] * g.r + beta[2] * g.c);
    if (mu < kProbFloor || mu > kProbCeil) {
      converged = false;
      break;
    }
  }

  fit.beta0 = beta[0];
  fit.beta1 = beta[1];
  fit.beta2 = beta[2];
  fit.converged = converged;
  fit.iterations = updates;
  return fit;
}

ProbabilityMatrix predict_q(const FitResult& fit, const DegreeSequence& row_margins,
                            const DegreeSequence& col_margins, const ConstraintMask& mask) {
  if (row_margins.axis != Axis::Row || col_margins.axis != Axis::Column)
    throw std::invalid_argument("predict_q: margin sequences have the wrong axes");
  const std::size_t r = row_margins.size();
  const std::size_t c = col_margins.size();
  if (mask.rows() != r || mask.cols() != c)
    throw std::invalid_argument("predict_q: constraint mask dimensions do not match margins");

  ProbabilityMatrix q{Matrix<double>(r, c, 0.0),
                      mask.has_constraints() ? NullModel::SdsmEc : NullModel::Sdsm};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      switch (mask(i, k)) {
        case CellState::Prohibited:
          q.values(i, k) = 0.0;
          break;
        case CellState::Required:
          q.values(i, k) = 1.0;
          break;
        case CellState::Free: {
          if (fit.degenerate) {
            q.values(i, k) = fit.degenerate_value;
          } else {
            const double mu =
                sigmoid(fit.beta0 + fit.beta1 * row_margins[i] + fit.beta2 * col_margins[k]);
            q.values(i, k) = std::clamp(mu, kProbFloor, kProbCeil);
          }
          break;
        }
      }
    }
  }
  return q;
}

ProbabilityMatrix estimate_q(const IncidenceMatrix& b, const ConstraintMask& mask,
                             FitResult* fit_out) {
  const ValidationReport report = validate(b, mask);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw std::invalid_argument(
        "estimate_q: incidence matrix violates its constraint mask at (" +
        std::to_string(v.row) + "," + std::to_string(v.col) + "): cell is " +
        to_string(v.state) + " (" + std::to_string(report.violations.size()) +
        " violation(s) total)");
  }
  const FitResult fit = fit_logistic(b, mask);
  if (fit_out != nullptr) *fit_out = fit;
  return predict_q(fit, row_sums(b), col_sums(b), mask);
}

}  // namespace bbone
