#pragma once

#include <optional>
#include <string>
#include <vector>

#include "battleflow/combat.hpp"
#include "battleflow/flowgraph.hpp"
#include "battleflow/ingest.hpp"
#include "battleflow/layout.hpp"
#include "battleflow/render.hpp"
#include "battleflow/semantics.hpp"
#include "battleflow/territory.hpp"

namespace battleflow {

/// Tunable parameters. Lengths left unset default to a fraction of the map
/// diagonal: cell radius 5%, combat eps 4%, long-range threshold 25%,
/// maximum band width 2.5%.
struct PipelineConfig {
  std::optional<double> cell_radius;
  double turn_angle = 30.0;
  double stop_speed = 0.5;
  double stop_min_duration = 5.0;
  double idle_gap = 60.0;
  double tau = 0.5;
  double time_window = kUnboundedWindow;
  std::optional<double> combat_eps;
  int min_pts = 3;
  std::optional<double> range_threshold;
  std::optional<double> band_max_width;
  RenderMode mode = RenderMode::flow;
  RenderStyle style;

  /// Throws std::invalid_argument for non-positive parameters or tau
  /// outside [0, 1].
  void validate() const;
};

/// Every intermediate product of one run.
struct PipelineResult {
  MatchLog log;  // clamped
  ClampReport clamp;
  std::optional<Territory> territory;
  std::vector<Vec2> positions;
  std::vector<SemanticTrajectory> semantic;  // one per unit
  std::vector<SemanticTrajectory> episodes;
  std::vector<TrajectoryGroup> groups;
  std::vector<RepresentativeTrajectory> representatives;
  std::vector<RepresentativeTrajectory> flow_routes;  // trimmed and split
  std::vector<CombatSite> sites;
  std::vector<LongRangeAttack> attacks;
  std::vector<FlowGraph> graphs;
  std::vector<FlowLayout> layouts;
  int max_troop = 1;
  double w_max = 0.0;
  BattleMapScene scene;
  std::string svg;
};

/// Flow graphs (and node locations) that replace the computed ones, for
/// re-rendering from a flowgraphs dump.
struct PresetFlowGraphs {
  std::vector<FlowGraph> graphs;
  std::vector<Vec2> positions;
};

/// ingest (clamp) -> territory -> semantics -> combat -> flowgraph -> layout
/// -> render.
PipelineResult run_pipeline(const MatchLog& log, const PipelineConfig& config,
                            const PresetFlowGraphs* preset = nullptr);

}  // namespace battleflow
