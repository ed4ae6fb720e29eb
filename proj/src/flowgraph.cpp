#include "battleflow/flowgraph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <tuple>

#include "battleflow/errors.hpp"

namespace battleflow {

int FlowGraph::in_weight(LandmarkId v) const {
  int w = 0;
  for (const FlowEdge& e : edges)
    if (e.to == v) w += e.weight;
  return w;
}

int FlowGraph::out_weight(LandmarkId v) const {
  int w = 0;
  for (const FlowEdge& e : edges)
    if (e.from == v) w += e.weight;
  return w;
}

int FlowGraph::out_degree(LandmarkId v) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [v](const FlowEdge& e) { return e.from == v; }));
}

int FlowGraph::in_degree(LandmarkId v) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [v](const FlowEdge& e) { return e.to == v; }));
}

int FlowGraph::termination_at(LandmarkId v) const {
  auto it = termination.find(v);
  return it == termination.end() ? 0 : it->second;
}

const FlowEdge* FlowGraph::find_edge(LandmarkId from, LandmarkId to) const {
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{from, to},
                             [](const FlowEdge& e, const std::pair<LandmarkId, LandmarkId>& key) {
                               return std::pair{e.from, e.to} < key;
                             });
  return it != edges.end() && it->from == from && it->to == to ? &*it : nullptr;
}

namespace {

using EdgeKey = std::pair<LandmarkId, LandmarkId>;

// Kahn's algorithm over an edge set. Returns false on a cycle.
bool topo_sort(const std::vector<LandmarkId>& nodes, const std::set<EdgeKey>& edges, std::vector<LandmarkId>* order) {
  std::map<LandmarkId, int> indegree;
  std::map<LandmarkId, std::vector<LandmarkId>> succ;
  for (LandmarkId v : nodes) indegree[v] = 0;
  for (const auto& [from, to] : edges) {
    ++indegree[to];
    indegree.try_emplace(from, 0);
    succ[from].push_back(to);
  }
  std::priority_queue<LandmarkId, std::vector<LandmarkId>, std::greater<>> ready;
  for (const auto& [v, d] : indegree)
    if (d == 0) ready.push(v);
  std::size_t emitted = 0;
  while (!ready.empty()) {
    const LandmarkId v = ready.top();
    ready.pop();
    ++emitted;
    if (order) order->push_back(v);
    for (LandmarkId w : succ[v])
      if (--indegree[w] == 0) ready.push(w);
  }
  return emitted == indegree.size();
}

std::set<EdgeKey> transitions(const RepresentativeTrajectory& rep) {
  std::set<EdgeKey> out;
  for (std::size_t i = 0; i + 1 < rep.landmarks.size(); ++i) out.insert({rep.landmarks[i], rep.landmarks[i + 1]});
  return out;
}

bool eviction_less(const RepresentativeTrajectory& a, const RepresentativeTrajectory& b) {
  static const std::string kNone;
  const std::string& ma = a.member_ids.empty() ? kNone : a.member_ids.front();
  const std::string& mb = b.member_ids.empty() ? kNone : b.member_ids.front();
  return std::tie(a.time_span.start, ma) < std::tie(b.time_span.start, mb);
}

}  // namespace

std::vector<LandmarkId> FlowGraph::topological_order() const {
  std::set<EdgeKey> keys;
  for (const FlowEdge& e : edges) keys.insert({e.from, e.to});
  std::vector<LandmarkId> order;
  if (!topo_sort(nodes, keys, &order)) throw CycleError("flow graph rooted at " + std::to_string(root) + " has a cycle");
  return order;
}

RepresentativeTrajectory trim_destination_enclosure(const RepresentativeTrajectory& rep,
                                                    std::span<const Polygon> enclosures,
                                                    std::span<const Vec2> positions) {
  if (rep.landmarks.size() < 2) return rep;
  const auto location = [&](LandmarkId id) { return positions[static_cast<std::size_t>(id)]; };
  const Vec2 destination = location(rep.landmarks.back());
  const auto enclosure = std::find_if(enclosures.begin(), enclosures.end(),
                                      [&](const Polygon& e) { return point_in_polygon(e, destination); });
  if (enclosure == enclosures.end()) return rep;

  const bool has_times = rep.landmark_times.size() == rep.landmarks.size();
  RepresentativeTrajectory out = rep;
  out.landmarks.clear();
  out.landmark_times.clear();
  const std::size_t last = rep.landmarks.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const LandmarkId id = rep.landmarks[i];
    const bool interior = i != 0 && i != last;
    if (interior && point_in_polygon(*enclosure, location(id))) continue;
    if (!out.landmarks.empty() && out.landmarks.back() == id) continue;
    out.landmarks.push_back(id);
    if (has_times) out.landmark_times.push_back(rep.landmark_times[i]);
  }
  return out.landmarks.size() < 2 ? rep : out;
}

std::vector<RepresentativeTrajectory> split_at_revisit(const RepresentativeTrajectory& rep) {
  const auto& ls = rep.landmarks;
  if (ls.size() < 2) return {rep};
  const bool has_times = rep.landmark_times.size() == ls.size();

  std::vector<std::pair<std::size_t, std::size_t>> ranges;  // inclusive
  std::size_t start = 0;
  std::set<LandmarkId> seen{ls[0]};
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (seen.contains(ls[i])) {
      ranges.emplace_back(start, i - 1);
      start = i - 1;
      seen = {ls[i - 1], ls[i]};
    } else {
      seen.insert(ls[i]);
    }
  }
  ranges.emplace_back(start, ls.size() - 1);

  std::vector<RepresentativeTrajectory> pieces;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const auto [first, last] = ranges[k];
    RepresentativeTrajectory piece = rep;
    piece.landmarks.assign(ls.begin() + static_cast<std::ptrdiff_t>(first),
                           ls.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    if (has_times) {
      piece.landmark_times.assign(rep.landmark_times.begin() + static_cast<std::ptrdiff_t>(first),
                                  rep.landmark_times.begin() + static_cast<std::ptrdiff_t>(last) + 1);
      if (k > 0) piece.time_span.start = rep.landmark_times[first];
      if (k + 1 < ranges.size()) piece.time_span.end = rep.landmark_times[last];
    }
    piece.segment = rep.segment + static_cast<int>(k);
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

FlowGraph merge_routes(std::span<const RepresentativeTrajectory> reps) {
  FlowGraph g;
  if (reps.empty()) return g;
  g.team = reps.front().team;
  g.root = reps.front().origin();
  g.time_span = reps.front().time_span;

  std::map<EdgeKey, int> weights;
  std::set<LandmarkId> nodes;
  for (const RepresentativeTrajectory& rep : reps) {
    if (rep.team != g.team || rep.origin() != g.root)
      throw InconsistentInput("merged routes must share team and origin");
    for (std::size_t i = 0; i + 1 < rep.landmarks.size(); ++i)
      weights[{rep.landmarks[i], rep.landmarks[i + 1]}] += rep.unit_count;
    nodes.insert(rep.landmarks.begin(), rep.landmarks.end());
    g.termination[rep.destination()] += rep.unit_count;
    g.time_span = g.time_span.united(rep.time_span);
    if (rep.segment == 0) g.origin_units += rep.unit_count;
    g.member_ids.insert(g.member_ids.end(), rep.member_ids.begin(), rep.member_ids.end());
  }
  std::sort(g.member_ids.begin(), g.member_ids.end());
  g.nodes.assign(nodes.begin(), nodes.end());
  for (const auto& [key, w] : weights) g.edges.push_back({key.first, key.second, w});
  g.topological_order();
  return g;
}

std::vector<FlowGraph> break_cycles(std::span<const RepresentativeTrajectory> reps) {
  std::vector<RepresentativeTrajectory> ordered(reps.begin(), reps.end());
  std::stable_sort(ordered.begin(), ordered.end(), eviction_less);

  struct Bin {
    std::vector<RepresentativeTrajectory> reps;
    std::set<EdgeKey> edges;
  };
  std::vector<Bin> bins;
  for (RepresentativeTrajectory& rep : ordered) {
    const std::set<EdgeKey> added = transitions(rep);
    Bin* target = nullptr;
    for (Bin& bin : bins) {
      std::set<EdgeKey> merged = bin.edges;
      merged.insert(added.begin(), added.end());
      if (topo_sort({}, merged, nullptr)) {
        target = &bin;
        break;
      }
    }
    if (!target) {
      if (!topo_sort({}, added, nullptr))
        throw CycleError("route from landmark " + std::to_string(rep.origin()) + " revisits a landmark");
      target = &bins.emplace_back();
    }
    target->edges.insert(added.begin(), added.end());
    target->reps.push_back(std::move(rep));
  }

  std::vector<FlowGraph> graphs;
  graphs.reserve(bins.size());
  for (const Bin& bin : bins) graphs.push_back(merge_routes(bin.reps));
  return graphs;
}

std::vector<FlowGraph> build_flow_graphs(std::span<const RepresentativeTrajectory> reps, double time_window) {
  std::map<std::pair<TeamId, LandmarkId>, std::vector<RepresentativeTrajectory>> buckets;
  for (const RepresentativeTrajectory& rep : reps)
    if (rep.landmarks.size() >= 2) buckets[{rep.team, rep.origin()}].push_back(rep);

  const auto overlaps = [time_window](const TimeSpan& a, const TimeSpan& b) {
    return a.start <= b.end + time_window && b.start <= a.end + time_window;
  };

  std::vector<FlowGraph> graphs;
  for (auto& [key, bucket] : buckets) {
    std::stable_sort(bucket.begin(), bucket.end(), eviction_less);
    std::vector<std::vector<RepresentativeTrajectory>> windows;
    for (const RepresentativeTrajectory& rep : bucket) {
      auto fits = std::find_if(windows.begin(), windows.end(), [&](const auto& window) {
        return std::all_of(window.begin(), window.end(),
                           [&](const RepresentativeTrajectory& other) { return overlaps(rep.time_span, other.time_span); });
      });
      if (fits == windows.end()) {
        windows.push_back({rep});
      } else {
        fits->push_back(rep);
      }
    }
    for (const auto& window : windows) {
      auto part = break_cycles(window);
      graphs.insert(graphs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return graphs;
}

}  // namespace battleflow
