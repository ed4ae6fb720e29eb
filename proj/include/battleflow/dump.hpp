#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "battleflow/combat.hpp"
#include "battleflow/flowgraph.hpp"
#include "battleflow/layout.hpp"
#include "battleflow/semantics.hpp"
#include "battleflow/territory.hpp"

namespace battleflow {

// Intermediate artifacts written by `--dump <stage>`. Keys are emitted in
// sorted order and doubles with round-trip precision, so dumps of equal
// inputs are byte-identical.

nlohmann::json territory_json(const Territory& territory);

nlohmann::json semantics_json(std::span<const SemanticTrajectory> trajectories,
                              std::span<const RepresentativeTrajectory> representatives);

/// Graphs plus the location of every node, enough to lay them out again.
nlohmann::json flowgraphs_json(std::span<const FlowGraph> graphs, std::span<const Vec2> positions);

struct LoadedFlowGraphs {
  std::vector<FlowGraph> graphs;
  std::vector<Vec2> positions;  // indexed by landmark id; unknown ids are (0, 0)
};

/// Inverse of flowgraphs_json. Throws SchemaError on malformed input and
/// CycleError if a graph is not acyclic.
LoadedFlowGraphs flowgraphs_from_json(const nlohmann::json& doc);

nlohmann::json layout_json(std::span<const FlowLayout> layouts);

nlohmann::json combat_json(std::span<const CombatSite> sites, std::span<const LongRangeAttack> attacks);

}  // namespace battleflow
