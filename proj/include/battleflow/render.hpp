#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "battleflow/combat.hpp"
#include "battleflow/layout.hpp"

namespace battleflow {

enum class RenderMode { flow, legacy };

struct RenderStyle {
  int canvas_width = 1000;
  int canvas_height = 0;  // 0 derives the height from the content aspect ratio
  double margin = 12.0;   // canvas units kept free on every side
  bool draw_cells = true;
  /// Legacy arrows grow to w0 * (1 + legacy_growth * s * L / L_max).
  double legacy_growth = 0.5;
};

/// World (y-up) to canvas (y-down) similarity transform.
struct CanvasTransform {
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;

  Vec2 apply(Vec2 p) const { return {p.x * scale + tx, -p.y * scale + ty}; }
};

struct FlowItem {
  TeamId team = 0;
  LandmarkId root = 0;
  int origin_units = 0;
  std::vector<Polygon> bands;       // ribbon outlines, world units
  std::vector<Polygon> arrowheads;  // one per termination node
};

struct LegacyArrowItem {
  TeamId team = 0;
  LandmarkId origin = 0;
  int units = 0;
  Polygon outline;
};

struct HotspotItem {
  SiteId site = 0;
  std::vector<HermiteSegment> outline;
};

struct AttackItem {
  TeamId team = 0;
  Vec2 from;
  Vec2 to;
  int count = 0;
  Polygon outline;
};

enum class IconKind { base, spawn };

struct IconItem {
  IconKind kind = IconKind::base;
  TeamId team = 0;
  Vec2 position;
};

struct LabelItem {
  TeamId team = 0;
  LandmarkId from = 0;
  LandmarkId to = 0;
  int value = 0;
  Vec2 anchor;
};

/// Renderable battle map. Layers are drawn in member order: background,
/// hotspots, movement, attacks, icons, labels.
struct BattleMapScene {
  std::string title;
  int width = 0;
  int height = 0;
  CanvasTransform transform;
  Rect bounds;
  RenderMode mode = RenderMode::flow;
  std::map<TeamId, std::string> team_colors;

  std::vector<Polygon> cells;
  std::vector<HotspotItem> hotspots;
  std::vector<FlowItem> flows;
  std::vector<LegacyArrowItem> legacy_arrows;
  std::vector<AttackItem> attacks;
  std::vector<IconItem> icons;
  std::vector<LabelItem> labels;
};

struct SceneInput {
  std::string title;
  Rect bounds;
  std::span<const Team> teams;
  std::span<const FlowLayout> layouts;                         // flow mode
  std::span<const RepresentativeTrajectory> representatives;  // legacy mode
  std::span<const Vec2> positions;                             // landmark locations
  std::span<const Landmark> cells;
  std::span<const CombatSite> sites;
  std::span<const LongRangeAttack> attacks;
  double w_max = 1.0;
  int max_troop = 1;
  RenderMode mode = RenderMode::flow;
  RenderStyle style;
};

/// Throws InconsistentInput when an element refers to a team not in `teams`.
BattleMapScene build_scene(const SceneInput& input);

/// Standalone SVG 1.1 document. Numbers use 6 significant digits; element
/// order follows the scene, so equal scenes give byte-identical output.
std::string emit_svg(const BattleMapScene& scene);

/// Units leaving each (team, origin) as drawn: graph origin units in flow
/// mode, representative unit counts in legacy mode.
std::map<std::pair<TeamId, LandmarkId>, int> origin_totals(const BattleMapScene& scene);

/// Fixed-format number used throughout the SVG output.
std::string format_number(double v);

}  // namespace battleflow
