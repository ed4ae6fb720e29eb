#include "battleflow/pipeline.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "battleflow/errors.hpp"

namespace battleflow {

void PipelineConfig::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  if (cell_radius) positive(*cell_radius, "cell radius");
  positive(turn_angle, "turn angle");
  positive(stop_speed, "stop speed");
  positive(stop_min_duration, "stop duration");
  positive(idle_gap, "idle gap");
  positive(time_window, "time window");
  if (combat_eps) positive(*combat_eps, "combat eps");
  if (min_pts < 1) throw std::invalid_argument("min pts must be positive");
  if (range_threshold) positive(*range_threshold, "range threshold");
  if (band_max_width) positive(*band_max_width, "band max width");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  if (style.canvas_width < 1 || style.canvas_height < 0) throw std::invalid_argument("invalid canvas size");
}

namespace {

Territory make_territory(const MatchLog& log, const PipelineConfig& cfg) {
  const double radius = cfg.cell_radius.value_or(0.05 * log.bounds.diagonal());
  std::vector<Vec2> points;
  try {
    points = extract_characteristic_points(log.units, {cfg.turn_angle, cfg.stop_speed, cfg.stop_min_duration});
  } catch (const DegenerateInput&) {
    // No movement at all: cells still follow wherever units were seen.
    for (const UnitTrack& u : log.units)
      for (const Sample& s : u.samples) points.push_back(s.pos);
  }
  if (points.empty()) {
    points.push_back({(log.bounds.xmin + log.bounds.xmax) / 2.0, (log.bounds.ymin + log.bounds.ymax) / 2.0});
  }
  return Territory::build(cluster_points(points, radius), log.bounds);
}

}  // namespace

PipelineResult run_pipeline(const MatchLog& input, const PipelineConfig& cfg, const PresetFlowGraphs* preset) {
  cfg.validate();
  PipelineResult r;
  r.log = clamp_to_bounds(input, &r.clamp);
  const MatchLog& log = r.log;
  const double diagonal = log.bounds.diagonal();

  r.territory.emplace(make_territory(log, cfg));
  const Territory& territory = *r.territory;
  r.positions = territory.positions();

  for (const UnitTrack& unit : log.units) {
    r.semantic.push_back(semantify(unit, territory));
    auto parts = split_episodes(r.semantic.back(), cfg.idle_gap);
    r.episodes.insert(r.episodes.end(), parts.begin(), parts.end());
  }
  r.groups = group_by_od(r.episodes);
  for (const TrajectoryGroup& group : r.groups) {
    auto reps = cluster_routes(group, cfg.tau);
    r.representatives.insert(r.representatives.end(), reps.begin(), reps.end());
  }

  const double eps = cfg.combat_eps.value_or(0.04 * diagonal);
  r.sites = cluster_combat(log.combat_events, eps, cfg.min_pts);
  r.attacks = detect_long_range(log.combat_events, cfg.range_threshold.value_or(0.25 * diagonal), log, territory,
                                r.sites);

  std::vector<Polygon> enclosures;
  for (const CombatSite& site : r.sites) enclosures.push_back(site.outline_polygon());

  std::span<const Vec2> positions = r.positions;
  if (preset) {
    r.graphs = preset->graphs;
    positions = preset->positions;
  } else {
    for (const RepresentativeTrajectory& rep : r.representatives) {
      auto pieces = split_at_revisit(trim_destination_enclosure(rep, enclosures, r.positions));
      r.flow_routes.insert(r.flow_routes.end(), pieces.begin(), pieces.end());
    }
    r.graphs = build_flow_graphs(r.flow_routes, cfg.time_window);
  }

  std::map<TeamId, int> team_sizes;
  for (const UnitTrack& u : log.units) ++team_sizes[u.team];
  r.max_troop = 1;
  for (const auto& [team, size] : team_sizes) r.max_troop = std::max(r.max_troop, size);
  for (const FlowGraph& g : r.graphs) {
    for (const FlowEdge& e : g.edges) r.max_troop = std::max(r.max_troop, e.weight);
    for (const auto& [v, units] : g.termination) r.max_troop = std::max(r.max_troop, units);
  }
  for (const RepresentativeTrajectory& rep : r.representatives) r.max_troop = std::max(r.max_troop, rep.unit_count);
  r.w_max = cfg.band_max_width.value_or(0.025 * diagonal);

  for (const FlowGraph& g : r.graphs) r.layouts.push_back(place_labels(layout_graph(g, positions, r.w_max, r.max_troop)));

  SceneInput scene;
  scene.title = log.map_name;
  scene.bounds = log.bounds;
  scene.teams = log.teams;
  scene.layouts = r.layouts;
  scene.representatives = r.representatives;
  scene.positions = r.positions;
  scene.cells = territory.landmarks();
  scene.sites = r.sites;
  scene.attacks = r.attacks;
  scene.w_max = r.w_max;
  scene.max_troop = r.max_troop;
  scene.mode = cfg.mode;
  scene.style = cfg.style;
  r.scene = build_scene(scene);
  r.svg = emit_svg(r.scene);
  return r;
}

}  // namespace battleflow
