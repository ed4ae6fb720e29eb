#include "battleflow/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "battleflow/errors.hpp"

namespace battleflow {

std::string format_number(double v) {
  if (std::abs(v) < 5e-7) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

constexpr const char* kMapFill = "#ebe6d6";
constexpr const char* kMapStroke = "#8c8672";
constexpr const char* kCellStroke = "#d5cfbb";
constexpr double kIconSize = 14.0;  // canvas units
constexpr double kLabelSize = 12.0;
constexpr int kLegacySamplesPerSegment = 12;

Polygon arrowhead(Vec2 base_centre, Vec2 direction, Vec2 normal, double base_width, double length) {
  return {base_centre + normal * (base_width / 2.0), base_centre + direction * length,
          base_centre - normal * (base_width / 2.0)};
}

// Catmull-Rom centreline through landmark locations.
std::vector<Vec2> smooth_centreline(const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  if (n < 2) return pts;
  const auto tangent = [&](std::size_t i) {
    if (i == 0) return pts[1] - pts[0];
    if (i == n - 1) return pts[n - 1] - pts[n - 2];
    return (pts[i + 1] - pts[i - 1]) * 0.5;
  };
  std::vector<Vec2> out;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const HermiteSegment seg{pts[i], tangent(i), pts[i + 1], tangent(i + 1)};
    for (int k = 0; k < kLegacySamplesPerSegment; ++k) out.push_back(seg.at(static_cast<double>(k) / kLegacySamplesPerSegment));
  }
  out.push_back(pts.back());
  return out;
}

double polyline_length(const std::vector<Vec2>& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) len += dist(line[i - 1], line[i]);
  return len;
}

Polygon legacy_arrow(const std::vector<Vec2>& line, double w0, double growth, double max_length) {
  const std::size_t n = line.size();
  std::vector<double> widths(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) run += dist(line[i - 1], line[i]);
    widths[i] = w0 * (1.0 + growth * run / max_length);
  }
  std::vector<Vec2> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 d = line[std::min(i + 1, n - 1)] - line[i == 0 ? 0 : i - 1];
    normals[i] = perp(normalized(d));
  }

  Polygon left, right;
  for (std::size_t i = 0; i < n; ++i) {
    left.push_back(line[i] + normals[i] * (widths[i] / 2.0));
    right.push_back(line[i] - normals[i] * (widths[i] / 2.0));
  }
  const Vec2 end = line.back();
  const Vec2 dir = normalized(line[n - 1] - line[n - 2]);
  const Polygon head = arrowhead(end, dir, normals.back(), 1.8 * widths.back(), 1.4 * widths.back());
  left.insert(left.end(), head.begin(), head.end());
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

Polygon attack_arrow(Vec2 from, Vec2 to, double shaft) {
  const Vec2 d = to - from;
  const double len = norm(d);
  const Vec2 dir = normalized(d);
  const Vec2 n = perp(dir);
  const double head_len = std::min(3.0 * shaft, 0.5 * len);
  const Vec2 neck = to - dir * head_len;
  return {from + n * (shaft / 2.0), neck + n * (shaft / 2.0), neck + n * (1.6 * shaft), to,
          neck - n * (1.6 * shaft), neck - n * (shaft / 2.0), from - n * (shaft / 2.0)};
}

void check_team(const BattleMapScene& scene, TeamId team, const char* what) {
  if (!scene.team_colors.contains(team))
    throw InconsistentInput(std::string(what) + " references unknown team " + std::to_string(team));
}

CanvasTransform fit_transform(const Rect& box, const RenderStyle& style, int* width, int* height) {
  const double bw = std::max(box.width(), 1e-9);
  const double bh = std::max(box.height(), 1e-9);
  const double m = style.margin;
  *width = style.canvas_width;
  const double inner_w = std::max(1.0, *width - 2.0 * m);
  double scale = inner_w / bw;
  if (style.canvas_height > 0) {
    *height = style.canvas_height;
    scale = std::min(scale, std::max(1.0, *height - 2.0 * m) / bh);
  } else {
    *height = static_cast<int>(std::ceil(bh * scale + 2.0 * m));
  }
  CanvasTransform t;
  t.scale = scale;
  t.tx = (*width - bw * scale) / 2.0 - box.xmin * scale;
  t.ty = (*height - bh * scale) / 2.0 + box.ymax * scale;
  return t;
}

}  // namespace

BattleMapScene build_scene(const SceneInput& in) {
  BattleMapScene scene;
  scene.title = in.title;
  scene.bounds = in.bounds;
  scene.mode = in.mode;
  for (const Team& t : in.teams) scene.team_colors.emplace(t.id, t.color);

  if (in.style.draw_cells)
    for (const Landmark& l : in.cells) scene.cells.push_back(l.cell);

  for (const CombatSite& site : in.sites) scene.hotspots.push_back({site.id, site.outline});

  if (in.mode == RenderMode::flow) {
    for (const FlowLayout& layout : in.layouts) {
      const FlowGraph& g = layout.graph;
      check_team(scene, g.team, "flow graph");
      FlowItem item{g.team, g.root, g.origin_units, {}, {}};
      for (const SplineBand& band : layout.bands) {
        item.bands.push_back(ribbon_polygon(band));
        if (band.label) scene.labels.push_back({g.team, band.from, band.to, *band.label, band.label_anchor});
      }
      for (const auto& [v, units] : g.termination) {
        if (units <= 0) continue;
        const NodeFrame& f = layout.frame(v);
        const double w = band_width(units, in.max_troop, in.w_max);
        item.arrowheads.push_back(arrowhead(f.position, f.tangent, f.normal, 1.8 * w, 1.4 * w));
      }
      scene.flows.push_back(std::move(item));
    }
  } else {
    std::vector<std::vector<Vec2>> lines;
    double max_length = 0.0;
    for (const RepresentativeTrajectory& rep : in.representatives) {
      check_team(scene, rep.team, "representative trajectory");
      std::vector<Vec2> pts;
      for (LandmarkId id : rep.landmarks) pts.push_back(in.positions[static_cast<std::size_t>(id)]);
      lines.push_back(smooth_centreline(pts));
      max_length = std::max(max_length, polyline_length(lines.back()));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const RepresentativeTrajectory& rep = in.representatives[i];
      if (lines[i].size() < 2 || max_length <= 0.0) continue;
      const double w0 = band_width(rep.unit_count, in.max_troop, in.w_max);
      scene.legacy_arrows.push_back(
          {rep.team, rep.origin(), rep.unit_count, legacy_arrow(lines[i], w0, in.style.legacy_growth, max_length)});
    }
  }

  for (const LongRangeAttack& a : in.attacks) {
    check_team(scene, a.attacker_team, "long-range attack");
    const double shaft = in.w_max * (0.2 + 0.05 * std::min(a.count, 6));
    scene.attacks.push_back({a.attacker_team, a.from, a.to, a.count, attack_arrow(a.from, a.to, shaft)});
  }

  for (const Team& t : in.teams) {
    if (t.base) scene.icons.push_back({IconKind::base, t.id, *t.base});
    for (Vec2 p : t.spawn_points) scene.icons.push_back({IconKind::spawn, t.id, p});
  }

  Rect box = in.bounds;
  const auto grow = [&](const Polygon& poly) {
    for (Vec2 p : poly) box.expand(p);
  };
  for (const auto& flow : scene.flows) {
    for (const auto& b : flow.bands) grow(b);
    for (const auto& h : flow.arrowheads) grow(h);
  }
  for (const auto& a : scene.legacy_arrows) grow(a.outline);
  for (const auto& a : scene.attacks) grow(a.outline);
  for (const CombatSite& site : in.sites)
    for (const HermiteSegment& seg : site.outline) grow({seg.p0, seg.bezier_c1(), seg.bezier_c2()});
  for (const auto& l : scene.labels) box.expand(l.anchor);

  scene.transform = fit_transform(box, in.style, &scene.width, &scene.height);
  return scene;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class SvgWriter {
 public:
  explicit SvgWriter(const CanvasTransform& t) : t_(t) {}

  std::string str() const { return out_.str(); }
  std::ostream& out() { return out_; }

  SvgWriter& num(double v) {
    out_ << format_number(v);
    return *this;
  }

  void point(Vec2 world) {
    const Vec2 c = t_.apply(world);
    out_ << format_number(c.x) << ',' << format_number(c.y);
  }

  void points_attr(const Polygon& poly) {
    out_ << " points=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (i) out_ << ' ';
      point(poly[i]);
    }
    out_ << '"';
  }

  void polygon_path(const Polygon& poly) {
    out_ << " d=\"";
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out_ << (i == 0 ? "M" : " L");
      point(poly[i]);
    }
    out_ << " Z\"";
  }

  void closed_curve_path(const std::vector<HermiteSegment>& segs) {
    out_ << " d=\"";
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (i == 0) {
        out_ << 'M';
        point(segs[i].p0);
      }
      out_ << " C";
      point(segs[i].bezier_c1());
      out_ << ' ';
      point(segs[i].bezier_c2());
      out_ << ' ';
      point(segs[i].p1);
    }
    out_ << " Z\"";
  }

 private:
  const CanvasTransform& t_;
  std::ostringstream out_;
};

}  // namespace

std::string emit_svg(const BattleMapScene& scene) {
  SvgWriter w(scene.transform);
  auto& o = w.out();
  const auto color = [&](TeamId team) { return scene.team_colors.at(team); };
  const auto canvas = [&](Vec2 p) { return scene.transform.apply(p); };

  o << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << scene.width << "\" height=\""
    << scene.height << "\" viewBox=\"0 0 " << scene.width << ' ' << scene.height << "\">\n";
  o << "<title>" << escape_xml(scene.title) << "</title>\n";

  o << "<defs>\n";
  for (const auto& [team, c] : scene.team_colors) {
    o << "<pattern id=\"hatch-" << team
      << "\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" patternTransform=\"rotate(45)\">"
      << "<rect width=\"6\" height=\"6\" fill=\"" << c << "\" fill-opacity=\"0.35\"/>"
      << "<line x1=\"1.5\" y1=\"0\" x2=\"1.5\" y2=\"6\" stroke=\"" << c << "\" stroke-width=\"2.5\"/></pattern>\n";
  }
  for (std::size_t i = 0; i < scene.attacks.size(); ++i) {
    const AttackItem& a = scene.attacks[i];
    const Vec2 p = canvas(a.from);
    const Vec2 q = canvas(a.to);
    o << "<linearGradient id=\"attack-" << i << "\" gradientUnits=\"userSpaceOnUse\" x1=\"" << format_number(p.x)
      << "\" y1=\"" << format_number(p.y) << "\" x2=\"" << format_number(q.x) << "\" y2=\"" << format_number(q.y)
      << "\"><stop offset=\"0\" stop-color=\"" << color(a.team) << "\" stop-opacity=\"1\"/><stop offset=\"1\" stop-color=\""
      << color(a.team) << "\" stop-opacity=\"0\"/></linearGradient>\n";
  }
  o << "</defs>\n";

  o << "<g id=\"background\">\n<polygon class=\"map\"";
  w.points_attr(rect_polygon(scene.bounds));
  o << " fill=\"" << kMapFill << "\" stroke=\"" << kMapStroke << "\" stroke-width=\"1\"/>\n";
  for (const Polygon& cell : scene.cells) {
    o << "<polygon class=\"cell\"";
    w.points_attr(cell);
    o << " fill=\"none\" stroke=\"" << kCellStroke << "\" stroke-width=\"0.5\"/>\n";
  }
  o << "</g>\n";

  if (!scene.hotspots.empty()) {
    o << "<g id=\"hotspots\">\n";
    for (const HotspotItem& h : scene.hotspots) {
      o << "<path class=\"hotspot\" data-site=\"" << h.site << "\"";
      w.closed_curve_path(h.outline);
      o << " fill=\"none\" stroke=\"#ffffff\" stroke-width=\"2.5\"/>\n";
    }
    o << "</g>\n";
  }

  if (!scene.flows.empty() || !scene.legacy_arrows.empty()) {
    o << "<g id=\"movement\">\n";
    for (const FlowItem& f : scene.flows) {
      o << "<g class=\"flow-graph\" data-team=\"" << f.team << "\" data-root=\"" << f.root << "\" data-origin-units=\""
        << f.origin_units << "\">\n";
      for (const Polygon& band : f.bands) {
        o << "<path class=\"band\"";
        w.polygon_path(band);
        o << " fill=\"url(#hatch-" << f.team << ")\" stroke=\"" << color(f.team) << "\" stroke-width=\"0.75\"/>\n";
      }
      for (const Polygon& head : f.arrowheads) {
        o << "<polygon class=\"arrowhead\"";
        w.points_attr(head);
        o << " fill=\"" << color(f.team) << "\"/>\n";
      }
      o << "</g>\n";
    }
    for (const LegacyArrowItem& a : scene.legacy_arrows) {
      o << "<polygon class=\"legacy-arrow\" data-team=\"" << a.team << "\" data-origin=\"" << a.origin
        << "\" data-units=\"" << a.units << "\"";
      w.points_attr(a.outline);
      o << " fill=\"url(#hatch-" << a.team << ")\" stroke=\"" << color(a.team) << "\" stroke-width=\"0.75\"/>\n";
    }
    o << "</g>\n";
  }

  if (!scene.attacks.empty()) {
    o << "<g id=\"attacks\">\n";
    for (std::size_t i = 0; i < scene.attacks.size(); ++i) {
      const AttackItem& a = scene.attacks[i];
      o << "<polygon class=\"attack\" data-team=\"" << a.team << "\" data-count=\"" << a.count << "\"";
      w.points_attr(a.outline);
      o << " fill=\"url(#attack-" << i << ")\" stroke=\"" << color(a.team)
        << "\" stroke-opacity=\"0.6\" stroke-width=\"0.75\"/>\n";
    }
    o << "</g>\n";
  }

  if (!scene.icons.empty()) {
    o << "<g id=\"icons\">\n";
    const double s = kIconSize;
    for (const IconItem& icon : scene.icons) {
      const Vec2 c = canvas(icon.position);
      const std::string& col = color(icon.team);
      if (icon.kind == IconKind::base) {
        // Flag: pole from the anchor point upward, pennant to the right.
        o << "<g class=\"icon base\" data-team=\"" << icon.team << "\"><line x1=\"" << format_number(c.x) << "\" y1=\""
          << format_number(c.y + s / 2) << "\" x2=\"" << format_number(c.x) << "\" y2=\"" << format_number(c.y - s / 2)
          << "\" stroke=\"#222222\" stroke-width=\"1.5\"/><polygon points=\"" << format_number(c.x) << ','
          << format_number(c.y - s / 2) << ' ' << format_number(c.x + 0.7 * s) << ',' << format_number(c.y - s / 4)
          << ' ' << format_number(c.x) << ',' << format_number(c.y) << "\" fill=\"" << col
          << "\" stroke=\"#222222\" stroke-width=\"0.75\"/></g>\n";
      } else {
        const double r = s / 2.5;
        o << "<g class=\"icon spawn\" data-team=\"" << icon.team << "\"><circle cx=\"" << format_number(c.x)
          << "\" cy=\"" << format_number(c.y) << "\" r=\"" << format_number(r) << "\" fill=\"" << col
          << "\" stroke=\"#222222\" stroke-width=\"1\"/><line x1=\"" << format_number(c.x - r) << "\" y1=\""
          << format_number(c.y) << "\" x2=\"" << format_number(c.x + r) << "\" y2=\"" << format_number(c.y)
          << "\" stroke=\"#222222\" stroke-width=\"1\"/><line x1=\"" << format_number(c.x) << "\" y1=\""
          << format_number(c.y - r) << "\" x2=\"" << format_number(c.x) << "\" y2=\"" << format_number(c.y + r)
          << "\" stroke=\"#222222\" stroke-width=\"1\"/></g>\n";
      }
    }
    o << "</g>\n";
  }

  if (!scene.labels.empty()) {
    o << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"" << format_number(kLabelSize)
      << "\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
    for (const LabelItem& l : scene.labels) {
      const Vec2 c = canvas(l.anchor);
      o << "<text class=\"label\" data-team=\"" << l.team << "\" data-edge=\"" << l.from << '-' << l.to << "\" x=\""
        << format_number(c.x) << "\" y=\"" << format_number(c.y) << "\" fill=\"" << color(l.team)
        << "\" stroke=\"#ffffff\" stroke-width=\"0.6\">" << l.value << "</text>\n";
    }
    o << "</g>\n";
  }

  o << "</svg>\n";
  return w.str();
}

std::map<std::pair<TeamId, LandmarkId>, int> origin_totals(const BattleMapScene& scene) {
  std::map<std::pair<TeamId, LandmarkId>, int> totals;
  if (scene.mode == RenderMode::flow) {
    for (const FlowItem& f : scene.flows)
      if (f.origin_units > 0) totals[{f.team, f.root}] += f.origin_units;
  } else {
    for (const LegacyArrowItem& a : scene.legacy_arrows) totals[{a.team, a.origin}] += a.units;
  }
  return totals;
}

}  // namespace battleflow
