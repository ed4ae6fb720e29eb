#include "battleflow/layout.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "battleflow/errors.hpp"

namespace battleflow {

const NodeFrame& FlowLayout::frame(LandmarkId v) const {
  auto it = std::find_if(frames.begin(), frames.end(), [v](const NodeFrame& f) { return f.landmark == v; });
  if (it == frames.end()) throw std::out_of_range("no frame for landmark " + std::to_string(v));
  return *it;
}

const SplineBand* FlowLayout::band(LandmarkId from, LandmarkId to) const {
  auto it = std::find_if(bands.begin(), bands.end(), [&](const SplineBand& b) { return b.from == from && b.to == to; });
  return it == bands.end() ? nullptr : &*it;
}

NodeFrame node_frame(const FlowGraph& graph, LandmarkId v, std::span<const Vec2> positions) {
  const auto at = [&](LandmarkId id) { return positions[static_cast<std::size_t>(id)]; };
  const Vec2 p = at(v);

  Vec2 sum{};
  const FlowEdge* heaviest_out = nullptr;
  const FlowEdge* heaviest_in = nullptr;
  for (const FlowEdge& e : graph.edges) {
    if (e.to == v) {
      sum += static_cast<double>(e.weight) * normalized(p - at(e.from));
      if (!heaviest_in || e.weight > heaviest_in->weight) heaviest_in = &e;
    }
    if (e.from == v) {
      sum += static_cast<double>(e.weight) * normalized(at(e.to) - p);
      if (!heaviest_out || e.weight > heaviest_out->weight) heaviest_out = &e;
    }
  }
  if (!heaviest_in && !heaviest_out) throw IsolatedNode("landmark " + std::to_string(v) + " has no edges");

  Vec2 t;
  if (norm(sum) >= 1e-9) {
    t = normalized(sum);
  } else if (heaviest_out) {
    t = normalized(at(heaviest_out->to) - p);
  } else {
    t = normalized(p - at(heaviest_in->from));
  }
  if (t == Vec2{}) t = {1.0, 0.0};  // coincident landmark locations
  return {v, p, t, perp(t)};
}

double band_width(int weight, int max_troop, double w_max) {
  if (weight < 1 || max_troop < weight) throw std::invalid_argument("band weight must lie in [1, max_troop]");
  return w_max * static_cast<double>(weight) / static_cast<double>(max_troop);
}

double clockwise_angle(Vec2 from, Vec2 to) {
  double a = -std::atan2(cross(from, to), dot(from, to));
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

std::vector<double> stack_offsets(const NodeFrame& node, std::span<const StackEntry> entries,
                                  std::span<const Vec2> positions) {
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> angles(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    angles[i] = clockwise_angle(node.tangent, positions[static_cast<std::size_t>(entries[i].other)] - node.position);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair{angles[a], entries[a].other} < std::pair{angles[b], entries[b].other};
  });

  double total = 0.0;
  for (const StackEntry& e : entries) total += e.width;
  std::vector<double> offsets(entries.size());
  double cursor = -total / 2.0;
  for (std::size_t i : order) {
    offsets[i] = cursor + entries[i].width / 2.0;
    cursor += entries[i].width;
  }
  return offsets;
}

FlowLayout layout_graph(const FlowGraph& graph, std::span<const Vec2> positions, double w_max, int max_troop) {
  FlowLayout layout;
  layout.graph = graph;
  for (LandmarkId v : graph.nodes) layout.frames.push_back(node_frame(graph, v, positions));

  using EdgeKey = std::pair<LandmarkId, LandmarkId>;
  std::map<EdgeKey, double> width;
  for (const FlowEdge& e : graph.edges) width[{e.from, e.to}] = band_width(e.weight, max_troop, w_max);

  std::map<EdgeKey, double> source_offset;
  std::map<EdgeKey, double> target_offset;
  for (const NodeFrame& f : layout.frames) {
    std::vector<StackEntry> out, in;
    for (const FlowEdge& e : graph.edges) {
      if (e.from == f.landmark) out.push_back({e.to, width[{e.from, e.to}]});
      if (e.to == f.landmark) in.push_back({e.from, width[{e.from, e.to}]});
    }
    const auto out_offsets = stack_offsets(f, out, positions);
    for (std::size_t i = 0; i < out.size(); ++i) source_offset[{f.landmark, out[i].other}] = out_offsets[i];
    const auto in_offsets = stack_offsets(f, in, positions);
    for (std::size_t i = 0; i < in.size(); ++i) target_offset[{in[i].other, f.landmark}] = in_offsets[i];
  }

  for (LandmarkId u : graph.topological_order()) {
    std::vector<const FlowEdge*> outgoing;
    for (const FlowEdge& e : graph.edges)
      if (e.from == u) outgoing.push_back(&e);
    std::sort(outgoing.begin(), outgoing.end(), [&](const FlowEdge* a, const FlowEdge* b) {
      return source_offset[{a->from, a->to}] < source_offset[{b->from, b->to}];
    });

    const NodeFrame& fu = layout.frame(u);
    for (const FlowEdge* e : outgoing) {
      const NodeFrame& fv = layout.frame(e->to);
      SplineBand band;
      band.from = e->from;
      band.to = e->to;
      band.p0 = fu.position + source_offset[{e->from, e->to}] * fu.normal;
      band.p1 = fv.position + target_offset[{e->from, e->to}] * fv.normal;
      const double d = dist(band.p0, band.p1);
      band.m0 = fu.tangent * d;
      band.m1 = fv.tangent * d;
      band.width = width[{e->from, e->to}];
      band.weight = e->weight;
      layout.bands.push_back(band);
    }
  }
  return layout;
}

namespace {

Vec2 curve_normal(const SplineBand& band, double s) {
  Vec2 d = normalized(band.curve().derivative(s));
  if (d == Vec2{}) d = normalized(band.p1 - band.p0);
  return perp(d);
}

}  // namespace

FlowLayout place_labels(FlowLayout layout) {
  for (SplineBand& band : layout.bands) {
    const bool labeled = band.from == layout.graph.root || layout.graph.out_degree(band.from) > 1;
    if (!labeled) {
      band.label.reset();
      continue;
    }
    band.label = band.weight;
    band.label_anchor = band.curve().at(0.5) + (band.width / 2.0 + 2.0) * curve_normal(band, 0.5);
  }
  return layout;
}

std::pair<Vec2, Vec2> ribbon_edges_at(const SplineBand& band, double s) {
  const Vec2 c = band.curve().at(s);
  const Vec2 n = curve_normal(band, s) * (band.width / 2.0);
  return {c + n, c - n};
}

Polygon ribbon_polygon(const SplineBand& band, int segments) {
  Polygon left, right;
  for (int i = 0; i <= segments; ++i) {
    const auto [l, r] = ribbon_edges_at(band, static_cast<double>(i) / segments);
    left.push_back(l);
    right.push_back(r);
  }
  left.insert(left.end(), right.rbegin(), right.rend());
  return left;
}

}  // namespace battleflow
