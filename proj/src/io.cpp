#include "bbone/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace bbone {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw CsvError(source, line, "cannot parse number '" + field + "'");
  return value;
}

// Splits one CSV line on commas. Labels are forbidden to contain commas, so
// no quoting layer is needed.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Reads the next line, stripping a trailing CR so Windows-authored files
// parse identically. Returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++number;
  return true;
}

void check_label(const std::string& label) {
  if (label.empty())
    throw std::invalid_argument("labels must be non-empty");
  if (label.find_first_of(",\n\r") != std::string::npos)
    throw std::invalid_argument("label '" + label + "' contains a comma or line break");
}

void expect_header(std::istream& in, const std::string& wanted, const std::string& source,
                   std::size_t& number) {
  std::string line;
  if (!next_line(in, line, number) || line != wanted)
    throw CsvError(source, 1, "expected header '" + wanted + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace

CsvError::CsvError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

EdgeListData read_edgelist(std::istream& in, const std::string& source) {
  std::size_t number = 0;
  expect_header(in, "agent,artifact", source, number);

  std::vector<std::string> agent_labels, artifact_labels;
  std::map<std::string, std::size_t> agent_index, artifact_index;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::string> warnings;

  auto intern = [](const std::string& label, std::vector<std::string>& labels,
                   std::map<std::string, std::size_t>& index) {
    auto [it, inserted] = index.try_emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw CsvError(source, number, "expected two non-empty fields 'agent,artifact'");
    const std::size_t i = intern(fields[0], agent_labels, agent_index);
    const std::size_t k = intern(fields[1], artifact_labels, artifact_index);
    if (!seen.insert({i, k}).second) {
      warnings.push_back(source + ":" + std::to_string(number) + ": duplicate edge " +
                         fields[0] + "," + fields[1]);
      continue;
    }
    edges.emplace_back(i, k);
  }
  if (edges.empty())
    throw CsvError(source, number == 0 ? 1 : number, "edge list contains no edges");

  Matrix<std::uint8_t> cells(agent_labels.size(), artifact_labels.size(), 0);
  for (const auto& [i, k] : edges) cells(i, k) = 1;
  return EdgeListData{IncidenceMatrix(std::move(agent_labels), std::move(artifact_labels),
                                      std::move(cells)),
                      std::move(warnings)};
}

EdgeListData read_edgelist_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_edgelist(in, path);
}

void write_edgelist(std::ostream& out, const IncidenceMatrix& b) {
  for (const auto& label : b.agent_labels()) check_label(label);
  for (const auto& label : b.artifact_labels()) check_label(label);
  out << "agent,artifact\n";
  for (std::size_t i = 0; i < b.agents(); ++i)
    for (std::size_t k = 0; k < b.artifacts(); ++k)
      if (b(i, k)) out << b.agent_labels()[i] << ',' << b.artifact_labels()[k] << '\n';
}

void write_edgelist_file(const std::string& path, const IncidenceMatrix& b) {
  std::ofstream out = open_output(path);
  write_edgelist(out, b);
  finish_output(out, path);
}

ConstraintMask read_constraints(std::istream& in, const IncidenceMatrix& b,
                                const std::string& source,
                                std::vector<std::string>* warnings) {
  std::size_t number = 0;
  expect_header(in, "agent,artifact,constraint", source, number);

  std::map<std::string, std::size_t> agent_index, artifact_index;
  for (std::size_t i = 0; i < b.agents(); ++i) agent_index[b.agent_labels()[i]] = i;
  for (std::size_t k = 0; k < b.artifacts(); ++k) artifact_index[b.artifact_labels()[k]] = k;

  Matrix<CellState> states(b.agents(), b.artifacts(), CellState::Free);
  std::string line;
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty())
      throw CsvError(source, number,
                     "expected three non-empty fields 'agent,artifact,constraint'");
    const auto agent = agent_index.find(fields[0]);
    if (agent == agent_index.end())
      throw CsvError(source, number, "unknown agent label '" + fields[0] + "'");
    const auto artifact = artifact_index.find(fields[1]);
    if (artifact == artifact_index.end())
      throw CsvError(source, number, "unknown artifact label '" + fields[1] + "'");
    CellState state;
    if (fields[2] == "prohibited")
      state = CellState::Prohibited;
    else if (fields[2] == "required")
      state = CellState::Required;
    else
      throw CsvError(source, number,
                     "constraint must be 'prohibited' or 'required', got '" + fields[2] + "'");
    CellState& cell = states(agent->second, artifact->second);
    if (cell == state) {
      if (warnings)
        warnings->push_back(source + ":" + std::to_string(number) +
                            ": duplicate constraint for pair " + fields[0] + "," + fields[1]);
    } else if (cell != CellState::Free) {
      throw CsvError(source, number,
                     "conflicting constraint for pair " + fields[0] + "," + fields[1]);
    }
    cell = state;
  }
  return ConstraintMask{std::move(states)};
}

ConstraintMask read_constraints_file(const std::string& path, const IncidenceMatrix& b,
                                     std::vector<std::string>* warnings) {
  std::ifstream in = open_input(path);
  return read_constraints(in, b, path, warnings);
}

void write_constraints(std::ostream& out, const IncidenceMatrix& b, const ConstraintMask& mask) {
  if (mask.rows() != b.agents() || mask.cols() != b.artifacts())
    throw std::invalid_argument("write_constraints: mask dimensions do not match matrix");
  for (const auto& label : b.agent_labels()) check_label(label);
  for (const auto& label : b.artifact_labels()) check_label(label);
  out << "agent,artifact,constraint\n";
  for (std::size_t i = 0; i < b.agents(); ++i)
    for (std::size_t k = 0; k < b.artifacts(); ++k)
      if (mask(i, k) != CellState::Free)
        out << b.agent_labels()[i] << ',' << b.artifact_labels()[k] << ','
            << to_string(mask(i, k)) << '\n';
}

void write_constraints_file(const std::string& path, const IncidenceMatrix& b,
                            const ConstraintMask& mask) {
  std::ofstream out = open_output(path);
  write_constraints(out, b, mask);
  finish_output(out, path);
}

namespace {

void write_pair_lines(std::ostream& out,
                      std::vector<std::pair<std::string, std::string>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [a, b] : pairs) out << a << ',' << b << '\n';
}

}  // namespace

void write_backbone_edges(std::ostream& out, const Backbone& backbone) {
  for (const auto& label : backbone.agent_labels) check_label(label);
  out << "agent_i,agent_j\n";
  std::vector<std::pair<std::string, std::string>> pairs;
  const std::size_t n = backbone.agent_labels.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (backbone.adjacency(i, j)) {
        const std::string& a = backbone.agent_labels[i];
        const std::string& b = backbone.agent_labels[j];
        pairs.emplace_back(std::min(a, b), std::max(a, b));
      }
  write_pair_lines(out, std::move(pairs));
}

void write_backbone_edges_file(const std::string& path, const Backbone& backbone) {
  std::ofstream out = open_output(path);
  write_backbone_edges(out, backbone);
  finish_output(out, path);
}

std::vector<std::pair<std::string, std::string>> read_backbone_edges(std::istream& in,
                                                                     const std::string& source) {
  std::size_t number = 0;
  expect_header(in, "agent_i,agent_j", source, number);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw CsvError(source, number, "expected two non-empty fields 'agent_i,agent_j'");
    edges.emplace_back(fields[0], fields[1]);
  }
  return edges;
}

void write_projection_edges(std::ostream& out, const Projection& p) {
  for (const auto& label : p.agent_labels) check_label(label);
  out << "agent_i,agent_j,weight\n";
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::pair<std::string, std::string>, int> weight_of;
  const std::size_t n = p.agent_labels.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p.weights(i, j) != 0) {
        const std::string& a = p.agent_labels[i];
        const std::string& b = p.agent_labels[j];
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        weight_of[key] = p.weights(i, j);
        pairs.push_back(std::move(key));
      }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& key : pairs)
    out << key.first << ',' << key.second << ',' << weight_of[key] << '\n';
}

void write_projection_edges_file(const std::string& path, const Projection& p) {
  std::ofstream out = open_output(path);
  write_projection_edges(out, p);
  finish_output(out, path);
}

void write_pvalues(std::ostream& out, const std::vector<std::string>& labels,
                   const Matrix<double>& values) {
  if (values.rows() != labels.size() || values.cols() != labels.size())
    throw std::invalid_argument("write_pvalues: matrix must be square over the labels");
  for (const auto& label : labels) check_label(label);
  out << "agent";
  for (const auto& label : labels) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < labels.size(); ++j) {
      out << ',';
      if (i != j) out << fmt_double(values(i, j));
    }
    out << '\n';
  }
}

void write_pvalues_file(const std::string& path, const std::vector<std::string>& labels,
                        const Matrix<double>& values) {
  std::ofstream out = open_output(path);
  write_pvalues(out, labels, values);
  finish_output(out, path);
}

PvalueMatrix read_pvalues(std::istream& in, const std::string& source) {
  std::size_t number = 0;
  std::string line;
  if (!next_line(in, line, number))
    throw CsvError(source, 1, "expected header 'agent,<labels...>'");
  std::vector<std::string> header = split_fields(line);
  if (header.size() < 2 || header[0] != "agent")
    throw CsvError(source, 1, "expected header 'agent,<labels...>'");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  for (const auto& label : labels)
    if (label.empty()) throw CsvError(source, 1, "empty agent label in header");

  const std::size_t n = labels.size();
  Matrix<double> values(n, n, 1.0);
  std::size_t row = 0;
  while (next_line(in, line, number)) {
    if (line.empty()) continue;
    if (row == n) throw CsvError(source, number, "more rows than agent labels");
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != n + 1)
      throw CsvError(source, number,
                     "expected " + std::to_string(n + 1) + " fields, got " +
                         std::to_string(fields.size()));
    if (fields[0] != labels[row])
      throw CsvError(source, number,
                     "row label '" + fields[0] + "' does not match header order ('" +
                         labels[row] + "' expected)");
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& field = fields[j + 1];
      if (field.empty()) {
        if (row != j)
          throw CsvError(source, number, "empty p-value off the diagonal");
        values(row, j) = 1.0;  // self-pairs are untested
      } else {
        values(row, j) = parse_double(field, source, number);
      }
    }
    ++row;
  }
  if (row != n)
    throw CsvError(source, number == 0 ? 1 : number,
                   "expected " + std::to_string(n) + " rows, got " + std::to_string(row));
  return PvalueMatrix{std::move(labels), std::move(values)};
}

SpaceSpec read_space_spec(std::istream& in, const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(source + ": " + e.what());
  }

  auto fail = [&source](const std::string& message) -> std::runtime_error {
    return std::runtime_error(source + ": " + message);
  };
  if (!doc.is_object()) throw fail("top level must be a JSON object");
  if (!doc.contains("rows") || !doc.contains("cols"))
    throw fail("'rows' and 'cols' margin arrays are required");

  auto read_margins = [&](const char* key) {
    const nlohmann::json& node = doc.at(key);
    if (!node.is_array() || node.empty())
      throw fail(std::string("'") + key + "' must be a non-empty array of integers");
    std::vector<int> values;
    values.reserve(node.size());
    for (const auto& v : node) {
      if (!v.is_number_integer())
        throw fail(std::string("'") + key + "' must contain only integers");
      values.push_back(v.get<int>());
    }
    return values;
  };

  SpaceSpec spec;
  spec.row_margins = DegreeSequence{read_margins("rows"), Axis::Row};
  spec.col_margins = DegreeSequence{read_margins("cols"), Axis::Column};
  const std::size_t r = spec.row_margins.size();
  const std::size_t c = spec.col_margins.size();
  Matrix<CellState> states(r, c, CellState::Free);

  auto apply_cells = [&](const char* key, CellState state) {
    if (!doc.contains(key)) return;
    const nlohmann::json& node = doc.at(key);
    if (!node.is_array())
      throw fail(std::string("'") + key + "' must be an array of [row, col] pairs");
    for (const auto& pair : node) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number_integer())
        throw fail(std::string("'") + key + "' entries must be [row, col] integer pairs");
      const long i = pair[0].get<long>();
      const long k = pair[1].get<long>();
      if (i < 0 || static_cast<std::size_t>(i) >= r || k < 0 ||
          static_cast<std::size_t>(k) >= c)
        throw fail(std::string("'") + key + "' cell [" + std::to_string(i) + ", " +
                   std::to_string(k) + "] is out of range");
      CellState& cell = states(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
      if (cell != CellState::Free && cell != state)
        throw fail("cell [" + std::to_string(i) + ", " + std::to_string(k) +
                   "] is both prohibited and required");
      cell = state;
    }
  };
  apply_cells("prohibited", CellState::Prohibited);
  apply_cells("required", CellState::Required);

  spec.mask = ConstraintMask{std::move(states)};
  return spec;
}

SpaceSpec read_space_spec_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_space_spec(in, path);
}

void write_space_spec(std::ostream& out, const SpaceSpec& spec) {
  nlohmann::json doc;
  doc["rows"] = spec.row_margins.values;
  doc["cols"] = spec.col_margins.values;
  doc["prohibited"] = nlohmann::json::array();
  doc["required"] = nlohmann::json::array();
  for (std::size_t i = 0; i < spec.mask.rows(); ++i)
    for (std::size_t k = 0; k < spec.mask.cols(); ++k) {
      if (spec.mask(i, k) == CellState::Prohibited)
        doc["prohibited"].push_back({i, k});
      else if (spec.mask(i, k) == CellState::Required)
        doc["required"].push_back({i, k});
    }
  out << doc.dump(2) << '\n';
}

void write_oracle_report(std::ostream& out, const SpaceSummary& summary,
                         const ProbabilityMatrix* estimated,
                         const DeviationReport* deviations) {
  out << "section,i,j,value\n";
  out << "cardinality,,," << summary.cardinality << '\n';
  if (summary.cardinality > 0) {
    for (std::size_t i = 0; i < summary.true_q.rows(); ++i)
      for (std::size_t k = 0; k < summary.true_q.cols(); ++k)
        out << "true_q," << i << ',' << k << ',' << fmt_double(summary.true_q(i, k)) << '\n';
  }
  if (estimated) {
    for (std::size_t i = 0; i < estimated->values.rows(); ++i)
      for (std::size_t k = 0; k < estimated->values.cols(); ++k)
        out << "estimated_q," << i << ',' << k << ','
            << fmt_double(estimated->values(i, k)) << '\n';
  }
  if (deviations) {
    for (const auto& cell : deviations->cells)
      out << "deviation," << cell.row << ',' << cell.col << ',' << fmt_double(cell.value)
          << '\n';
    out << "deviation_mean,,," << fmt_double(deviations->mean) << '\n';
    out << "deviation_max,,," << fmt_double(deviations->max) << '\n';
    out << "hist_bin_width,,," << fmt_double(DeviationReport::kBinWidth) << '\n';
    for (std::size_t bin = 0; bin < deviations->histogram.size(); ++bin)
      out << "histogram," << bin << ",," << deviations->histogram[bin] << '\n';
  }
}

void write_oracle_report_file(const std::string& path, const SpaceSummary& summary,
                              const ProbabilityMatrix* estimated,
                              const DeviationReport* deviations) {
  std::ofstream out = open_output(path);
  write_oracle_report(out, summary, estimated, deviations);
  finish_output(out, path);
}

}  // namespace bbone
