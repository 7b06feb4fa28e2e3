#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bbone/bipartite.hpp"
#include "bbone/nullmodel.hpp"

namespace bbone {

/// A microcanonical matrix space: every binary matrix with exactly these row
/// and column sums, 0 at prohibited cells, and 1 at required cells.
struct SpaceSpec {
  DegreeSequence row_margins;
  DegreeSequence col_margins;
  ConstraintMask mask;
};

/// Exact enumeration result. ones(i,k) counts the members with a 1 at (i,k);
/// true_q is that count divided by the cardinality (all zeros when the space
/// is empty). first_member is the first matrix in enumeration order, handy as
/// a representative of the space.
struct SpaceSummary {
  std::uint64_t cardinality = 0;
  Matrix<double> true_q;
  Matrix<std::uint64_t> ones;
  std::optional<Matrix<std::uint8_t>> first_member;
};

/// Desk-scale guardrails: enumeration refuses dimensions beyond max_rows x
/// max_cols and specs whose estimated search width (product of per-row
/// column-subset counts) exceeds max_search_width.
struct EnumerationLimits {
  std::size_t max_rows = 6;
  std::size_t max_cols = 6;
  double max_search_width = 1e8;
};

/// Enumerates the space by row-wise backtracking with margin-feasibility
/// pruning. An empty space yields cardinality 0 (not an error); mismatched
/// dimensions or margin totals throw std::invalid_argument; exceeding the
/// desk-scale limits throws std::runtime_error.
SpaceSummary enumerate_space(const SpaceSpec& spec, const EnumerationLimits& limits = {});

/// Absolute deviations |estimated - true| over free cells, with summary
/// statistics and fixed-width histogram bins.
struct DeviationReport {
  struct Cell {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
  };

  static constexpr double kBinWidth = 0.05;
  static constexpr std::size_t kBinCount = 20;

  std::vector<Cell> cells;
  double mean = 0.0;
  double max = 0.0;
  std::array<std::uint64_t, kBinCount> histogram{};
};

/// Compares an estimated probability matrix against exact enumeration truth.
/// Constrained cells are excluded (both sides are exactly 0 or exactly 1
/// there). Throws std::invalid_argument on dimension mismatch and
/// std::runtime_error when the space is empty.
DeviationReport q_deviation(const ProbabilityMatrix& estimated, const SpaceSummary& truth,
                            const ConstraintMask& mask);

/// Exact fraction of space members whose projected weight at (i,j) is at
/// least the observed weight P_ij of b. A microcanonical cross-check of the
/// canonical significance machinery at desk scale.
double pvalue_oracle(const IncidenceMatrix& b, const SpaceSpec& spec, std::size_t i,
                     std::size_t j, const EnumerationLimits& limits = {});

}  // namespace bbone
