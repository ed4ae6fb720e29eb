#include "battleflow/dump.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "battleflow/errors.hpp"

namespace battleflow {

using nlohmann::json;

namespace {

json point(Vec2 p) { return json::array({p.x, p.y}); }

json polygon(const Polygon& poly) {
  json out = json::array();
  for (Vec2 p : poly) out.push_back(point(p));
  return out;
}

json span_json(const TimeSpan& s) { return json::array({s.start, s.end}); }

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing field '") + key + "'");
  return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
  const json& j = field(obj, key, path);
  if (!j.is_array()) throw SchemaError(path + "." + key, "expected array");
  return j;
}

template <typename T>
T value(const json& obj, const char* key, const std::string& path) {
  try {
    return field(obj, key, path).get<T>();
  } catch (const json::type_error&) {
    throw SchemaError(path + "." + key, "wrong type");
  }
}

Vec2 read_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(path, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json territory_json(const Territory& territory) {
  json landmarks = json::array();
  for (const Landmark& l : territory.landmarks()) {
    landmarks.push_back({{"id", l.id}, {"site", point(l.site)}, {"centroid", point(l.centroid)}, {"cell", polygon(l.cell)}});
  }
  const Rect& b = territory.bounds();
  return {{"bounds", {b.xmin, b.ymin, b.xmax, b.ymax}}, {"landmarks", std::move(landmarks)}};
}

json semantics_json(std::span<const SemanticTrajectory> trajectories,
                    std::span<const RepresentativeTrajectory> representatives) {
  json units = json::array();
  for (const SemanticTrajectory& st : trajectories) {
    json visits = json::array();
    for (const Visit& v : st.visits) visits.push_back({v.landmark, v.enter_t, v.exit_t});
    units.push_back({{"unit", st.unit_id}, {"team", st.team}, {"visits", std::move(visits)}});
  }
  json reps = json::array();
  for (const RepresentativeTrajectory& r : representatives) {
    reps.push_back({{"team", r.team},
                    {"landmarks", r.landmarks},
                    {"landmark_times", r.landmark_times},
                    {"unit_count", r.unit_count},
                    {"time_span", span_json(r.time_span)},
                    {"member_ids", r.member_ids}});
  }
  return {{"units", std::move(units)}, {"representatives", std::move(reps)}};
}

json flowgraphs_json(std::span<const FlowGraph> graphs, std::span<const Vec2> positions) {
  json out = json::array();
  for (const FlowGraph& g : graphs) {
    json nodes = json::array();
    for (LandmarkId v : g.nodes) nodes.push_back({{"id", v}, {"position", point(positions[static_cast<std::size_t>(v)])}});
    json edges = json::array();
    for (const FlowEdge& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
    json term = json::array();
    for (const auto& [v, units] : g.termination) term.push_back({{"node", v}, {"units", units}});
    out.push_back({{"team", g.team},
                   {"root", g.root},
                   {"nodes", std::move(nodes)},
                   {"edges", std::move(edges)},
                   {"termination", std::move(term)},
                   {"time_span", span_json(g.time_span)},
                   {"origin_units", g.origin_units},
                   {"member_ids", g.member_ids}});
  }
  return {{"graphs", std::move(out)}};
}

LoadedFlowGraphs flowgraphs_from_json(const json& doc) {
  LoadedFlowGraphs loaded;
  const json& graphs = array_field(doc, "graphs", "$");
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const std::string path = "$.graphs[" + std::to_string(gi) + "]";
    const json& j = graphs[gi];
    FlowGraph g;
    g.team = value<TeamId>(j, "team", path);
    g.root = value<LandmarkId>(j, "root", path);
    g.origin_units = value<int>(j, "origin_units", path);
    g.member_ids = value<std::vector<std::string>>(j, "member_ids", path);
    const json& span = field(j, "time_span", path);
    const Vec2 s = read_point(span, path + ".time_span");
    g.time_span = {s.x, s.y};

    std::set<LandmarkId> nodes;
    const json& node_list = array_field(j, "nodes", path);
    for (std::size_t k = 0; k < node_list.size(); ++k) {
      const std::string npath = path + ".nodes[" + std::to_string(k) + "]";
      const auto id = value<LandmarkId>(node_list[k], "id", npath);
      if (id < 0) throw SchemaError(npath + ".id", "negative landmark id");
      nodes.insert(id);
      if (loaded.positions.size() <= static_cast<std::size_t>(id)) loaded.positions.resize(static_cast<std::size_t>(id) + 1);
      loaded.positions[static_cast<std::size_t>(id)] = read_point(field(node_list[k], "position", npath), npath + ".position");
    }
    g.nodes.assign(nodes.begin(), nodes.end());

    const json& edge_list = array_field(j, "edges", path);
    for (std::size_t k = 0; k < edge_list.size(); ++k) {
      const std::string epath = path + ".edges[" + std::to_string(k) + "]";
      FlowEdge e{value<LandmarkId>(edge_list[k], "from", epath), value<LandmarkId>(edge_list[k], "to", epath),
                 value<int>(edge_list[k], "weight", epath)};
      if (!nodes.contains(e.from) || !nodes.contains(e.to)) throw SchemaError(epath, "edge endpoint is not a node");
      if (e.weight < 1 || e.from == e.to) throw SchemaError(epath, "invalid edge");
      g.edges.push_back(e);
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const FlowEdge& a, const FlowEdge& b) { return std::pair{a.from, a.to} < std::pair{b.from, b.to}; });

    const json& term = array_field(j, "termination", path);
    for (std::size_t k = 0; k < term.size(); ++k) {
      const std::string tpath = path + ".termination[" + std::to_string(k) + "]";
      g.termination[value<LandmarkId>(term[k], "node", tpath)] = value<int>(term[k], "units", tpath);
    }
    g.topological_order();
    loaded.graphs.push_back(std::move(g));
  }
  return loaded;
}

json layout_json(std::span<const FlowLayout> layouts) {
  json out = json::array();
  for (const FlowLayout& layout : layouts) {
    json frames = json::array();
    for (const NodeFrame& f : layout.frames)
      frames.push_back({{"landmark", f.landmark}, {"position", point(f.position)}, {"tangent", point(f.tangent)},
                        {"normal", point(f.normal)}});
    json bands = json::array();
    for (const SplineBand& b : layout.bands) {
      bands.push_back({{"from", b.from},
                       {"to", b.to},
                       {"p0", point(b.p0)},
                       {"m0", point(b.m0)},
                       {"p1", point(b.p1)},
                       {"m1", point(b.m1)},
                       {"width", b.width},
                       {"weight", b.weight},
                       {"label", b.label ? json(*b.label) : json(nullptr)},
                       {"label_anchor", b.label ? point(b.label_anchor) : json(nullptr)}});
    }
    out.push_back({{"team", layout.graph.team},
                   {"root", layout.graph.root},
                   {"frames", std::move(frames)},
                   {"bands", std::move(bands)}});
  }
  return {{"layouts", std::move(out)}};
}

json combat_json(std::span<const CombatSite> sites, std::span<const LongRangeAttack> attacks) {
  json s = json::array();
  for (const CombatSite& site : sites) {
    json outline = json::array();
    for (const HermiteSegment& seg : site.outline)
      outline.push_back({{"p0", point(seg.p0)}, {"m0", point(seg.m0)}, {"p1", point(seg.p1)}, {"m1", point(seg.m1)}});
    s.push_back({{"id", site.id},
                 {"members", site.members},
                 {"centroid", point(site.centroid)},
                 {"hull", polygon(site.hull)},
                 {"outline", std::move(outline)},
                 {"time_span", span_json(site.time_span)}});
  }
  json a = json::array();
  for (const LongRangeAttack& attack : attacks) {
    a.push_back({{"team", attack.attacker_team},
                 {"from", point(attack.from)},
                 {"to", point(attack.to)},
                 {"count", attack.count},
                 {"events", attack.events}});
  }
  return {{"sites", std::move(s)}, {"attacks", std::move(a)}};
}

}  // namespace battleflow
