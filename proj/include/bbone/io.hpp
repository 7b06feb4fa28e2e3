#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bbone/extract.hpp"
#include "bbone/oracle.hpp"

namespace bbone {

/// Parse failure in a CSV input; carries the 1-based line number.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Edge list CSV, header `agent,artifact`, one edge per line. Duplicate pairs
/// collapse to a single 1 and are reported in warnings. Label indices follow
/// first appearance order.
struct EdgeListData {
  IncidenceMatrix matrix;
  std::vector<std::string> warnings;
};

EdgeListData read_edgelist(std::istream& in, const std::string& source = "<stream>");
EdgeListData read_edgelist_file(const std::string& path);
void write_edgelist(std::ostream& out, const IncidenceMatrix& b);
void write_edgelist_file(const std::string& path, const IncidenceMatrix& b);

/// Constraints CSV, header `agent,artifact,constraint`, constraint one of
/// `prohibited` / `required`. Pairs may be absent from the edge list, but
/// labels never seen in the edge list's corresponding column are rejected.
/// Conflicting states for one pair are an error; repeating the same state is
/// only a warning.
ConstraintMask read_constraints(std::istream& in, const IncidenceMatrix& b,
                                const std::string& source = "<stream>",
                                std::vector<std::string>* warnings = nullptr);
ConstraintMask read_constraints_file(const std::string& path, const IncidenceMatrix& b,
                                     std::vector<std::string>* warnings = nullptr);
void write_constraints(std::ostream& out, const IncidenceMatrix& b, const ConstraintMask& mask);
void write_constraints_file(const std::string& path, const IncidenceMatrix& b,
                            const ConstraintMask& mask);

/// Backbone edges CSV, header `agent_i,agent_j`: each undirected edge once,
/// lexicographically smaller label first, lines sorted lexicographically.
void write_backbone_edges(std::ostream& out, const Backbone& backbone);
void write_backbone_edges_file(const std::string& path, const Backbone& backbone);
std::vector<std::pair<std::string, std::string>> read_backbone_edges(
    std::istream& in, const std::string& source = "<stream>");

/// Projection edges CSV, header `agent_i,agent_j,weight`: unordered pairs with
/// nonzero weight, same ordering conventions as backbone edges.
void write_projection_edges(std::ostream& out, const Projection& p);
void write_projection_edges_file(const std::string& path, const Projection& p);

/// Dense labeled p-value matrix CSV: header `agent,<labels...>`, one row per
/// agent. Diagonal cells are written empty (self-pairs are untested) and read
/// back as 1.
struct PvalueMatrix {
  std::vector<std::string> labels;
  Matrix<double> values;
};

void write_pvalues(std::ostream& out, const std::vector<std::string>& labels,
                   const Matrix<double>& values);
void write_pvalues_file(const std::string& path, const std::vector<std::string>& labels,
                        const Matrix<double>& values);
PvalueMatrix read_pvalues(std::istream& in, const std::string& source = "<stream>");

/// Matrix-space spec as JSON: {"rows": [...], "cols": [...],
/// "prohibited": [[i,k], ...], "required": [[i,k], ...]} with 0-based cell
/// indices; the constraint arrays are optional.
SpaceSpec read_space_spec(std::istream& in, const std::string& source = "<stream>");
SpaceSpec read_space_spec_file(const std::string& path);
void write_space_spec(std::ostream& out, const SpaceSpec& spec);

/// Oracle study report as a tall CSV with header `section,i,j,value`:
/// cardinality, exact cell probabilities, estimated cell probabilities,
/// per-free-cell deviations, deviation summary, and histogram bins. The
/// probability sections are present only when the space is non-empty;
/// estimated / deviation sections only when those inputs are supplied.
void write_oracle_report(std::ostream& out, const SpaceSummary& summary,
                         const ProbabilityMatrix* estimated, const DeviationReport* deviations);
void write_oracle_report_file(const std::string& path, const SpaceSummary& summary,
                              const ProbabilityMatrix* estimated,
                              const DeviationReport* deviations);

}  // namespace bbone
