#include "bbone/synth.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace bbone {

namespace {

// One raw 32-bit draw per visited cell, consumed in row-major order. The
// comparison is against density * 2^32 so that density 1.0 always places an
// edge and density 0.0 never does, independent of platform.
bool bernoulli_draw(std::mt19937& rng, double density) {
  return static_cast<double>(rng()) < density * 4294967296.0;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return labels;
}

}  // namespace

TwoBlockNetwork two_block(const TwoBlockSpec& spec) {
  if (spec.agents_per_group < 2)
    throw std::invalid_argument("two_block: need at least 2 agents per group");
  if (spec.artifacts_per_group < 2)
    throw std::invalid_argument("two_block: need at least 2 artifacts per group");
  if (!(spec.within_density > 0.0) || spec.within_density > 1.0)
    throw std::invalid_argument("two_block: within-group density must lie in (0, 1]");

  const std::size_t a = static_cast<std::size_t>(spec.agents_per_group);
  const std::size_t x = static_cast<std::size_t>(spec.artifacts_per_group);
  const std::size_t rows = 2 * a;
  const std::size_t cols = 2 * x;

  std::vector<std::string> agent_labels = numbered("a", a);
  for (auto& label : numbered("b", a)) agent_labels.push_back(std::move(label));
  std::vector<std::string> artifact_labels = numbered("u", x);
  for (auto& label : numbered("v", x)) artifact_labels.push_back(std::move(label));

  Matrix<std::uint8_t> cells(rows, cols, 0);
  Matrix<CellState> states(rows, cols, CellState::Prohibited);
  std::mt19937 rng(spec.seed);
  for (std::size_t i = 0; i < rows; ++i) {
    const bool first_group = i < a;
    for (std::size_t k = 0; k < cols; ++k) {
      const bool same_group = first_group == (k < x);
      if (!same_group) continue;  // cross edges stay 0 and prohibited
      states(i, k) = CellState::Free;
      if (bernoulli_draw(rng, spec.within_density)) cells(i, k) = 1;
    }
  }

  // Isolated vertices cannot survive an edge-list round trip, so give every
  // all-zero row/column one edge at the first cell of its own block. Rows are
  // fixed first; the column pass only ever adds edges, so both guarantees
  // hold afterwards.
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t base = i < a ? 0 : x;
    bool any = false;
    for (std::size_t k = 0; k < x; ++k) any = any || cells(i, base + k);
    if (!any) cells(i, base) = 1;
  }
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t base = k < x ? 0 : a;
    bool any = false;
    for (std::size_t i = 0; i < a; ++i) any = any || cells(base + i, k);
    if (!any) cells(base, k) = 1;
  }

  return TwoBlockNetwork{IncidenceMatrix(std::move(agent_labels), std::move(artifact_labels),
                                         std::move(cells)),
                         ConstraintMask{std::move(states)}};
}

IncidenceMatrix random_bipartite(int rows, int cols, double density, std::uint32_t seed) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("random_bipartite: need at least one agent and one artifact");
  if (!(density >= 0.0) || density > 1.0)
    throw std::invalid_argument("random_bipartite: density must lie in [0, 1]");

  const std::size_t r = static_cast<std::size_t>(rows);
  const std::size_t c = static_cast<std::size_t>(cols);
  Matrix<std::uint8_t> cells(r, c, 0);
  std::mt19937 rng(seed);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k)
      if (bernoulli_draw(rng, density)) cells(i, k) = 1;

  return IncidenceMatrix(numbered("a", r), numbered("p", c), cells);
}

}  // namespace bbone
