#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbone/matrix.hpp"

namespace bbone {

enum class Axis { Row, Column };

/// Degree sequence along one axis of an incidence matrix: row sums are the
/// agent degrees, column sums the artifact degrees.
struct DegreeSequence {
  std::vector<int> values;
  Axis axis = Axis::Row;

  std::size_t size() const { return values.size(); }
  int operator[](std::size_t i) const { return values[i]; }
};

/// Binary agent x artifact incidence matrix with labeled rows and columns.
/// Labels are the public identity of vertices; row/column indices follow
/// first-appearance order in the input that built the matrix.
class IncidenceMatrix {
 public:
  /// Validates on construction: every cell 0/1, labels unique within each
  /// dimension, and at least one agent and one artifact.
  IncidenceMatrix(std::vector<std::string> agent_labels,
                  std::vector<std::string> artifact_labels,
                  Matrix<std::uint8_t> cells);

  std::size_t agents() const { return cells_.rows(); }
  std::size_t artifacts() const { return cells_.cols(); }

  std::uint8_t operator()(std::size_t i, std::size_t k) const { return cells_(i, k); }

  const Matrix<std::uint8_t>& cells() const { return cells_; }
  const std::vector<std::string>& agent_labels() const { return agent_labels_; }
  const std::vector<std::string>& artifact_labels() const { return artifact_labels_; }

  friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;

 private:
  std::vector<std::string> agent_labels_;
  std::vector<std::string> artifact_labels_;
  Matrix<std::uint8_t> cells_;
};

/// Per-cell constraint state of the null model ensemble. A prohibited cell is
/// 0 in every ensemble member (a structural zero); a required cell is 1 in
/// every member; free cells are unconstrained.
enum class CellState : std::uint8_t { Free, Prohibited, Required };

struct ConstraintMask {
  Matrix<CellState> states;

  static ConstraintMask all_free(std::size_t rows, std::size_t cols) {
    return ConstraintMask{Matrix<CellState>(rows, cols, CellState::Free)};
  }

  CellState operator()(std::size_t i, std::size_t k) const { return states(i, k); }
  std::size_t rows() const { return states.rows(); }
  std::size_t cols() const { return states.cols(); }

  bool has_constraints() const;

  friend bool operator==(const ConstraintMask&, const ConstraintMask&) = default;
};

/// Weighted one-mode projection P = B * B^T: entry (i,j) counts the artifacts
/// shared by agents i and j; the diagonal holds agent degrees.
struct Projection {
  std::vector<std::string> agent_labels;
  Matrix<int> weights;
};

/// A cell where the incidence matrix contradicts its constraint mask, together
/// with the state the mask demands there.
struct ConstraintViolation {
  std::size_t row = 0;
  std::size_t col = 0;
  CellState state = CellState::Free;

  friend bool operator==(const ConstraintViolation&, const ConstraintViolation&) = default;
};

struct ValidationReport {
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
};

DegreeSequence row_sums(const IncidenceMatrix& b);
DegreeSequence col_sums(const IncidenceMatrix& b);

Projection project(const IncidenceMatrix& b);

/// Checks that the matrix is 0 at every prohibited cell and 1 at every
/// required cell. Dimension mismatch throws std::invalid_argument; constraint
/// violations are returned in the report, not thrown.
ValidationReport validate(const IncidenceMatrix& b, const ConstraintMask& mask);

std::string to_string(CellState s);

}  // namespace bbone
