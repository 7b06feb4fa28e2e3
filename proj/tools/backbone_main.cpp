// Command-line front end: ingest bipartite edge lists and cell constraints,
// extract statistically significant projection backbones, run exact
// enumeration studies, and generate synthetic inputs.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bbone/extract.hpp"
#include "bbone/io.hpp"
#include "bbone/oracle.hpp"
#include "bbone/synth.hpp"

namespace {

using namespace bbone;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::string> numbered_labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return labels;
}

struct ExtractOpts {
  std::string input;
  std::string constraints;
  std::string output;
  std::string pvalues;
  double alpha = 0.05;
  std::string model;  // empty = pick from presence of --constraints
};

int run_extract(const ExtractOpts& opts) {
  EdgeListData data = read_edgelist_file(opts.input);
  print_warnings(data.warnings);
  const IncidenceMatrix& b = data.matrix;

  ConstraintMask mask{Matrix<CellState>(b.agents(), b.artifacts(), CellState::Free)};
  if (!opts.constraints.empty()) {
    std::vector<std::string> warnings;
    mask = read_constraints_file(opts.constraints, b, &warnings);
    print_warnings(warnings);
    const ValidationReport report = validate(b, mask);
    if (!report.ok()) {
      for (const auto& v : report.violations)
        std::cerr << "error: edge state at " << b.agent_labels()[v.row] << ','
                  << b.artifact_labels()[v.col] << " violates its '" << to_string(v.state)
                  << "' constraint\n";
      return 1;
    }
  }

  NullModel model;
  if (opts.model.empty())
    model = opts.constraints.empty() ? NullModel::Sdsm : NullModel::SdsmEc;
  else
    model = opts.model == "sdsm" ? NullModel::Sdsm : NullModel::SdsmEc;

  FitResult fit;
  const Backbone backbone = extract_backbone(b, mask, opts.alpha, model, {}, &fit);
  if (!fit.converged)
    std::cerr << "warning: null-model fit did not converge after " << fit.iterations
              << " iterations; results use the clamped fit\n";

  std::size_t retained = 0;
  for (std::size_t i = 0; i < b.agents(); ++i)
    for (std::size_t j = i + 1; j < b.agents(); ++j) retained += backbone.adjacency(i, j);

  if (opts.output.empty())
    write_backbone_edges(std::cout, backbone);
  else
    write_backbone_edges_file(opts.output, backbone);
  if (!opts.pvalues.empty())
    write_pvalues_file(opts.pvalues, backbone.agent_labels, backbone.pvalues);

  std::ostream& summary = opts.output.empty() ? std::cerr : std::cout;
  summary << "agents: " << b.agents() << '\n'
          << "artifacts: " << b.artifacts() << '\n'
          << "pairs tested: " << b.agents() * (b.agents() - 1) / 2 << '\n'
          << "edges retained: " << retained << '\n'
          << "model: " << to_string(backbone.model) << '\n'
          << "alpha: " << backbone.alpha << '\n';
  return 0;
}

struct OracleOpts {
  std::string margins;
  std::string report;
};

int run_oracle(const OracleOpts& opts) {
  const SpaceSpec spec = read_space_spec_file(opts.margins);
  const SpaceSummary summary = enumerate_space(spec);

  std::size_t free_cells = 0;
  for (std::size_t i = 0; i < spec.mask.rows(); ++i)
    for (std::size_t k = 0; k < spec.mask.cols(); ++k)
      if (spec.mask(i, k) == CellState::Free) ++free_cells;

  std::cout << "cardinality: " << summary.cardinality << '\n';
  if (summary.cardinality == 0) {
    write_oracle_report_file(opts.report, summary, nullptr, nullptr);
    std::cerr << "note: the space is empty; the report contains the cardinality only\n";
    return 0;
  }
  if (free_cells == 0) {
    write_oracle_report_file(opts.report, summary, nullptr, nullptr);
    std::cerr << "note: every cell is constrained; nothing to estimate\n";
    return 0;
  }

  const IncidenceMatrix representative(numbered_labels("a", spec.mask.rows()),
                                       numbered_labels("p", spec.mask.cols()),
                                       *summary.first_member);
  FitResult fit;
  const ProbabilityMatrix estimated = estimate_q(representative, spec.mask, &fit);
  if (!fit.converged)
    std::cerr << "warning: null-model fit did not converge after " << fit.iterations
              << " iterations; the report uses the clamped fit\n";
  const DeviationReport deviations = q_deviation(estimated, summary, spec.mask);
  write_oracle_report_file(opts.report, summary, &estimated, &deviations);

  std::cout << "free cells: " << free_cells << '\n'
            << "deviation mean: " << deviations.mean << '\n'
            << "deviation max: " << deviations.max << '\n';
  return 0;
}

struct GenerateOpts {
  std::string kind = "two-block";
  std::string output;
  std::string constraints;
  int agents = 6;
  int artifacts = 4;
  double density = 0.8;
  std::uint32_t seed = 1;
};

int run_generate(const GenerateOpts& opts) {
  if (opts.kind == "two-block") {
    if (opts.constraints.empty()) {
      std::cerr << "error: two-block generation writes a constraints file; pass --constraints\n";
      return 1;
    }
    const TwoBlockNetwork net =
        two_block({opts.agents, opts.artifacts, opts.density, opts.seed});
    write_edgelist_file(opts.output, net.matrix);
    write_constraints_file(opts.constraints, net.matrix, net.mask);
  } else {
    const IncidenceMatrix b =
        random_bipartite(opts.agents, opts.artifacts, opts.density, opts.seed);
    write_edgelist_file(opts.output, b);
    if (!opts.constraints.empty()) {
      const ConstraintMask all_free{
          Matrix<CellState>(b.agents(), b.artifacts(), CellState::Free)};
      write_constraints_file(opts.constraints, b, all_free);
    }
  }
  return 0;
}

struct ProjectOpts {
  std::string input;
  std::string output;
};

int run_project(const ProjectOpts& opts) {
  EdgeListData data = read_edgelist_file(opts.input);
  print_warnings(data.warnings);
  const Projection p = project(data.matrix);
  if (opts.output.empty())
    write_projection_edges(std::cout, p);
  else
    write_projection_edges_file(opts.output, p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite projection backbones under degree-and-constraint null models"};
  app.require_subcommand(1);

  ExtractOpts extract_opts;
  CLI::App* extract_cmd =
      app.add_subcommand("extract", "Extract the significant backbone of a projection");
  extract_cmd->add_option("--input", extract_opts.input, "Bipartite edge list CSV")
      ->required();
  extract_cmd->add_option("--constraints", extract_opts.constraints,
                          "Cell constraints CSV (prohibited / required pairs)");
  extract_cmd->add_option("--output", extract_opts.output,
                          "Backbone edges CSV (default: standard output)");
  extract_cmd->add_option("--pvalues", extract_opts.pvalues, "Dense p-value matrix CSV");
  extract_cmd
      ->add_option("--alpha", extract_opts.alpha, "Two-sided significance level in (0, 1)")
      ->capture_default_str();
  extract_cmd
      ->add_option("--model", extract_opts.model,
                   "Null model (default: sdsm-ec when --constraints is given, else sdsm)")
      ->check(CLI::IsMember({"sdsm", "sdsm-ec"}));

  OracleOpts oracle_opts;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Enumerate a matrix space exactly and score the estimate");
  oracle_cmd->add_option("--margins", oracle_opts.margins, "Margins/constraints spec JSON")
      ->required();
  oracle_cmd->add_option("--report", oracle_opts.report, "Study report CSV")->required();

  GenerateOpts generate_opts;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "Write a synthetic edge list (and constraints)");
  generate_cmd->add_option("--kind", generate_opts.kind, "Generator: two-block or random")
      ->capture_default_str()
      ->check(CLI::IsMember({"two-block", "random"}));
  generate_cmd->add_option("--output", generate_opts.output, "Edge list CSV to write")
      ->required();
  generate_cmd->add_option("--constraints", generate_opts.constraints,
                           "Constraints CSV to write (required for two-block)");
  generate_cmd
      ->add_option("--agents", generate_opts.agents,
                   "Agents per group (two-block) or in total (random)")
      ->capture_default_str();
  generate_cmd
      ->add_option("--artifacts", generate_opts.artifacts,
                   "Artifacts per group (two-block) or in total (random)")
      ->capture_default_str();
  generate_cmd->add_option("--density", generate_opts.density, "Edge density")
      ->capture_default_str();
  generate_cmd->add_option("--seed", generate_opts.seed, "Generator seed")
      ->capture_default_str();

  ProjectOpts project_opts;
  CLI::App* project_cmd =
      app.add_subcommand("project", "Write the weighted agent-agent projection");
  project_cmd->add_option("--input", project_opts.input, "Bipartite edge list CSV")
      ->required();
  project_cmd->add_option("--output", project_opts.output,
                          "Weighted projection CSV (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract_cmd->parsed()) return run_extract(extract_opts);
    if (oracle_cmd->parsed()) return run_oracle(oracle_opts);
    if (generate_cmd->parsed()) return run_generate(generate_opts);
    if (project_cmd->parsed()) return run_project(project_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
