#include "bbone/bipartite.hpp"

#include <stdexcept>
#include <unordered_set>

namespace bbone {

namespace {

void check_unique(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second)
      throw std::invalid_argument(std::string("duplicate ") + what + " label '" + label + "'");
  }
}

}  // namespace

IncidenceMatrix::IncidenceMatrix(std::vector<std::string> agent_labels,
                                 std::vector<std::string> artifact_labels,
                                 Matrix<std::uint8_t> cells)
    : agent_labels_(std::move(agent_labels)),
      artifact_labels_(std::move(artifact_labels)),
      cells_(std::move(cells)) {
  if (cells_.rows() == 0 || cells_.cols() == 0)
    throw std::invalid_argument("incidence matrix needs at least one agent and one artifact");
  if (agent_labels_.size() != cells_.rows() || artifact_labels_.size() != cells_.cols())
    throw std::invalid_argument("label count does not match incidence matrix dimensions");
  check_unique(agent_labels_, "agent");
  check_unique(artifact_labels_, "artifact");
  for (std::size_t i = 0; i < cells_.rows(); ++i)
    for (std::size_t k = 0; k < cells_.cols(); ++k)
      if (cells_(i, k) > 1)
        throw std::invalid_argument("incidence matrix cells must be 0 or 1");
}

bool ConstraintMask::has_constraints() const {
  for (std::size_t i = 0; i < states.rows(); ++i)
    for (std::size_t k = 0; k < states.cols(); ++k)
      if (states(i, k) != CellState::Free) return true;
  return false;
}

DegreeSequence row_sums(const IncidenceMatrix& b) {
  DegreeSequence d{std::vector<int>(b.agents(), 0), Axis::Row};
  for (std::size_t i = 0; i < b.agents(); ++i)
    for (std::size_t k = 0; k < b.artifacts(); ++k) d.values[i] += b(i, k);
  return d;
}

DegreeSequence col_sums(const IncidenceMatrix& b) {
  DegreeSequence d{std::vector<int>(b.artifacts(), 0), Axis::Column};
  for (std::size_t i = 0; i < b.agents(); ++i)
    for (std::size_t k = 0; k < b.artifacts(); ++k) d.values[k] += b(i, k);
  return d;
}

Projection project(const IncidenceMatrix& b) {
  const std::size_t r = b.agents();
  Projection p{b.agent_labels(), Matrix<int>(r, r, 0)};
  // Walk artifacts and bump every member pair; cost is the sum of squared
  // column degrees instead of a dense r*r*c triple loop.
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < b.artifacts(); ++k) {
    members.clear();
    for (std::size_t i = 0; i < r; ++i)
      if (b(i, k)) members.push_back(i);
    for (std::size_t a = 0; a < members.size(); ++a) {
      p.weights(members[a], members[a]) += 1;
      for (std::size_t z = a + 1; z < members.size(); ++z) {
        p.weights(members[a], members[z]) += 1;
        p.weights(members[z], members[a]) += 1;
      }
    }
  }
  return p;
}

ValidationReport validate(const IncidenceMatrix& b, const ConstraintMask& mask) {
  if (mask.rows() != b.agents() || mask.cols() != b.artifacts())
    throw std::invalid_argument("constraint mask dimensions do not match incidence matrix");
  ValidationReport report;
  for (std::size_t i = 0; i < b.agents(); ++i) {
    for (std::size_t k = 0; k < b.artifacts(); ++k) {
      const CellState s = mask(i, k);
      if ((s == CellState::Prohibited && b(i, k) != 0) ||
          (s == CellState::Required && b(i, k) != 1))
        report.violations.push_back({i, k, s});
    }
  }
  return report;
}

std::string to_string(CellState s) {
  switch (s) {
    case CellState::Free: return "free";
    case CellState::Prohibited: return "prohibited";
    case CellState::Required: return "required";
  }
  return "free";
}

}  // namespace bbone
