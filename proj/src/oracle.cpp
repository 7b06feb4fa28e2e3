#include "bbone/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bbone {

namespace {

// Binomial coefficient in double precision, only for the search-width
// estimate; desk-scale arguments keep it far from overflow.
double choose(std::size_t n, long k) {
  if (k < 0 || static_cast<std::size_t>(k) > n) return 0.0;
  double v = 1.0;
  for (long i = 0; i < k; ++i) v = v * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return v;
}

struct Enumerator {
  std::size_t r = 0, c = 0;
  std::vector<int> rr, cc;  // residual margins after required cells commit
  Matrix<std::uint8_t> current{0, 0};
  std::vector<std::vector<std::size_t>> free_cols;  // per row, ascending
  // free_below[i][k]: free cells in column k over rows i..r-1
  std::vector<std::vector<int>> free_below;
  bool empty_by_construction = false;

  explicit Enumerator(const SpaceSpec& spec, const EnumerationLimits& limits) {
    const DegreeSequence& rows = spec.row_margins;
    const DegreeSequence& cols = spec.col_margins;
    if (rows.axis != Axis::Row || cols.axis != Axis::Column)
      throw std::invalid_argument("enumerate_space: margin sequences have the wrong axes");
    r = rows.size();
    c = cols.size();
    if (r == 0 || c == 0)
      throw std::invalid_argument("enumerate_space: margins must be non-empty");
    if (spec.mask.rows() != r || spec.mask.cols() != c)
      throw std::invalid_argument("enumerate_space: mask dimensions do not match margins");
    for (int v : rows.values)
      if (v < 0 || static_cast<std::size_t>(v) > c)
        throw std::invalid_argument("enumerate_space: row sum outside [0, cols]");
    for (int v : cols.values)
      if (v < 0 || static_cast<std::size_t>(v) > r)
        throw std::invalid_argument("enumerate_space: column sum outside [0, rows]");
    const long row_total = std::accumulate(rows.values.begin(), rows.values.end(), 0L);
    const long col_total = std::accumulate(cols.values.begin(), cols.values.end(), 0L);
    if (row_total != col_total)
      throw std::invalid_argument("enumerate_space: row and column totals differ (" +
                                  std::to_string(row_total) + " vs " +
                                  std::to_string(col_total) + ")");
    if (r > limits.max_rows || c > limits.max_cols)
      throw std::runtime_error("enumerate_space: dimensions exceed the desk-scale bound (" +
                               std::to_string(limits.max_rows) + "x" +
                               std::to_string(limits.max_cols) + ")");

    rr = rows.values;
    cc = cols.values;
    current = Matrix<std::uint8_t>(r, c, 0);
    free_cols.assign(r, {});

    // Commit required cells up front and enumerate the residual free-cell
    // problem; an over-committed margin means the space is empty.
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < c; ++k) {
        switch (spec.mask(i, k)) {
          case CellState::Required:
            current(i, k) = 1;
            if (--rr[i] < 0 || --cc[k] < 0) empty_by_construction = true;
            break;
          case CellState::Free:
            free_cols[i].push_back(k);
            break;
          case CellState::Prohibited:
            break;
        }
      }
    }
    if (empty_by_construction) return;

    double width = 1.0;
    for (std::size_t i = 0; i < r; ++i) {
      width *= choose(free_cols[i].size(), rr[i]);
      if (width == 0.0) break;  // some row cannot be completed at all
    }
    if (width > limits.max_search_width)
      throw std::runtime_error("enumerate_space: estimated search width " +
                               std::to_string(width) + " exceeds the configured limit");

    free_below.assign(r + 1, std::vector<int>(c, 0));
    for (std::size_t i = r; i-- > 0;) {
      for (std::size_t k = 0; k < c; ++k)
        free_below[i][k] = free_below[i + 1][k];
      for (std::size_t k : free_cols[i]) ++free_below[i][k];
    }
  }

  template <typename Visitor>
  void run(Visitor&& visit) {
    if (empty_by_construction) return;
    descend(0, visit);
  }

 private:
  template <typename Visitor>
  void descend(std::size_t row, Visitor& visit) {
    // Margin feasibility: every residual column demand must fit into the free
    // cells still ahead. At row == r this collapses to "all demands are 0",
    // so a reached leaf is always a valid member.
    for (std::size_t k = 0; k < c; ++k)
      if (cc[k] > free_below[row][k]) return;
    if (row == r) {
      visit(const_cast<const Matrix<std::uint8_t>&>(current));
      return;
    }
    place(row, 0, rr[row], visit);
  }

  template <typename Visitor>
  void place(std::size_t row, std::size_t idx, int need, Visitor& visit) {
    if (need == 0) {
      descend(row + 1, visit);
      return;
    }
    if (free_cols[row].size() - idx < static_cast<std::size_t>(need)) return;
    const std::size_t k = free_cols[row][idx];
    if (cc[k] > 0) {
      current(row, k) = 1;
      --cc[k];
      place(row, idx + 1, need - 1, visit);
      ++cc[k];
      current(row, k) = 0;
    }
    place(row, idx + 1, need, visit);
  }
};

}  // namespace

SpaceSummary enumerate_space(const SpaceSpec& spec, const EnumerationLimits& limits) {
  Enumerator enumerator(spec, limits);
  const std::size_t r = spec.row_margins.size();
  const std::size_t c = spec.col_margins.size();

  SpaceSummary summary;
  summary.true_q = Matrix<double>(r, c, 0.0);
  summary.ones = Matrix<std::uint64_t>(r, c, 0);

  enumerator.run([&](const Matrix<std::uint8_t>& member) {
    if (!summary.first_member) summary.first_member = member;
    ++summary.cardinality;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < c; ++k) summary.ones(i, k) += member(i, k);
  });

  if (summary.cardinality > 0) {
    const double denom = static_cast<double>(summary.cardinality);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < c; ++k)
        summary.true_q(i, k) = static_cast<double>(summary.ones(i, k)) / denom;
  }
  return summary;
}

DeviationReport q_deviation(const ProbabilityMatrix& estimated, const SpaceSummary& truth,
                            const ConstraintMask& mask) {
  const std::size_t r = truth.true_q.rows();
  const std::size_t c = truth.true_q.cols();
  if (estimated.values.rows() != r || estimated.values.cols() != c)
    throw std::invalid_argument("q_deviation: estimate dimensions do not match the space");
  if (mask.rows() != r || mask.cols() != c)
    throw std::invalid_argument("q_deviation: mask dimensions do not match the space");
  if (truth.cardinality == 0)
    throw std::runtime_error("q_deviation: the space is empty");

  DeviationReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      if (mask(i, k) != CellState::Free) continue;
      const double dev = std::abs(estimated.values(i, k) - truth.true_q(i, k));
      report.cells.push_back({i, k, dev});
      sum += dev;
      report.max = std::max(report.max, dev);
      const auto bin = std::min(static_cast<std::size_t>(dev / DeviationReport::kBinWidth),
                                DeviationReport::kBinCount - 1);
      ++report.histogram[bin];
    }
  }
  if (!report.cells.empty()) report.mean = sum / static_cast<double>(report.cells.size());
  return report;
}

double pvalue_oracle(const IncidenceMatrix& b, const SpaceSpec& spec, std::size_t i,
                     std::size_t j, const EnumerationLimits& limits) {
  if (i == j)
    throw std::invalid_argument("pvalue_oracle: self-pairs are never tested");
  if (i >= b.agents() || j >= b.agents())
    throw std::out_of_range("pvalue_oracle: agent index out of range");
  if (spec.row_margins.size() != b.agents() || spec.col_margins.size() != b.artifacts())
    throw std::invalid_argument("pvalue_oracle: spec dimensions do not match incidence matrix");

  int observed = 0;
  for (std::size_t k = 0; k < b.artifacts(); ++k) observed += b(i, k) * b(j, k);

  Enumerator enumerator(spec, limits);
  std::uint64_t members = 0, at_least = 0;
  enumerator.run([&](const Matrix<std::uint8_t>& member) {
    ++members;
    int weight = 0;
    for (std::size_t k = 0; k < member.cols(); ++k) weight += member(i, k) * member(j, k);
    if (weight >= observed) ++at_least;
  });
  if (members == 0)
    throw std::runtime_error("pvalue_oracle: the space is empty");
  return static_cast<double>(at_least) / static_cast<double>(members);
}

}  // namespace bbone
