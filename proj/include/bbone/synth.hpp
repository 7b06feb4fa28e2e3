#pragma once

#include <cstdint>

#include "bbone/bipartite.hpp"

namespace bbone {

/// Two groups of agents and two groups of artifacts; members connect only to
/// their own group's artifacts. Cross-group cells are prohibited in the mask.
struct TwoBlockSpec {
  int agents_per_group = 0;
  int artifacts_per_group = 0;
  double within_density = 1.0;  // in (0, 1]
  std::uint32_t seed = 0;
};

struct TwoBlockNetwork {
  IncidenceMatrix matrix;
  ConstraintMask mask;
};

/// Deterministic per seed: one 32-bit MT19937 draw per within-group cell in
/// row-major order, a cell is 1 when draw < within_density * 2^32. A fix-up
/// pass then guarantees every agent and artifact at least one within-group
/// edge (edge-list files cannot represent isolated vertices, and the
/// constraints file references every label). Agents are labeled a1.. / b1..
/// by group, artifacts u1.. / v1.. . Requires at least 2 agents and 2
/// artifacts per group and density in (0, 1].
TwoBlockNetwork two_block(const TwoBlockSpec& spec);

/// Each cell is 1 independently with the given density; same draw scheme as
/// two_block, one draw per cell in row-major order. Agents are labeled a1..,
/// artifacts p1.. .
IncidenceMatrix random_bipartite(int rows, int cols, double density, std::uint32_t seed);

}  // namespace bbone
