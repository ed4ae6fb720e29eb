#include "battleflow/combat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace battleflow {

Polygon CombatSite::outline_polygon(int per_segment) const {
  Polygon out;
  out.reserve(outline.size() * static_cast<std::size_t>(per_segment));
  for (const HermiteSegment& seg : outline)
    for (int k = 0; k < per_segment; ++k) out.push_back(seg.at(static_cast<double>(k) / per_segment));
  return out;
}

namespace {

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Outward (right-hand) unit normal of a counterclockwise edge.
Vec2 outward_normal(Vec2 edge) { return normalized(Vec2{edge.y, -edge.x}); }

}  // namespace

std::vector<HermiteSegment> enclosure_outline(std::span<const Vec2> hull, double radius) {
  if (hull.empty()) return {};

  Polygon ring;
  if (hull.size() == 1) {
    for (int k = 0; k < 8; ++k) ring.push_back(hull[0] + rotate({radius, 0.0}, k * std::numbers::pi / 4.0));
  } else {
    const std::size_t n = hull.size();
    constexpr double kMaxStep = std::numbers::pi / 4.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 v = hull[i];
      const Vec2 n_in = outward_normal(v - hull[(i + n - 1) % n]);
      const Vec2 n_out = outward_normal(hull[(i + 1) % n] - v);
      const double sweep = std::atan2(std::abs(cross(n_in, n_out)), dot(n_in, n_out));
      const int steps = std::max(1, static_cast<int>(std::ceil(sweep / kMaxStep)));
      for (int k = 0; k <= steps; ++k) ring.push_back(v + rotate(n_in, sweep * k / steps) * radius);
    }
  }

  Polygon pts;
  const double tol = 1e-12 * std::max(1.0, radius);
  for (Vec2 p : ring)
    if (pts.empty() || dist(pts.back(), p) > tol) pts.push_back(p);
  while (pts.size() > 1 && dist(pts.front(), pts.back()) <= tol) pts.pop_back();

  const std::size_t m = pts.size();
  std::vector<HermiteSegment> segments;
  segments.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 prev = pts[(i + m - 1) % m];
    const Vec2 a = pts[i];
    const Vec2 b = pts[(i + 1) % m];
    const Vec2 next = pts[(i + 2) % m];
    segments.push_back({a, (b - prev) * 0.5, b, (next - a) * 0.5});
  }
  return segments;
}

std::vector<CombatSite> cluster_combat(std::span<const CombatEvent> events, double eps, int min_pts) {
  const std::size_t n = events.size();
  const double eps2 = eps * eps;
  const auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if (dist2(events[i].target_pos, events[j].target_pos) <= eps2) out.push_back(j);
    return out;
  };

  constexpr int kUnassigned = -1;
  std::vector<int> label(n, kUnassigned);
  std::vector<bool> visited(n, false);
  int clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = true;
    auto seeds = neighbours(i);
    if (seeds.size() < static_cast<std::size_t>(min_pts)) continue;

    const int cid = clusters++;
    label[i] = cid;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const std::size_t j = seeds[k];
      if (label[j] == kUnassigned) label[j] = cid;
      if (visited[j]) continue;
      visited[j] = true;
      auto more = neighbours(j);
      if (more.size() >= static_cast<std::size_t>(min_pts)) seeds.insert(seeds.end(), more.begin(), more.end());
    }
  }

  std::vector<CombatSite> sites(static_cast<std::size_t>(clusters));
  for (std::size_t i = 0; i < n; ++i)
    if (label[i] != kUnassigned) sites[static_cast<std::size_t>(label[i])].members.push_back(i);

  for (CombatSite& site : sites) {
    std::vector<Vec2> targets;
    Vec2 sum{};
    site.time_span = {events[site.members.front()].t, events[site.members.front()].t};
    for (std::size_t i : site.members) {
      targets.push_back(events[i].target_pos);
      sum += events[i].target_pos;
      site.time_span = site.time_span.united({events[i].t, events[i].t});
    }
    site.centroid = sum / static_cast<double>(targets.size());
    site.hull = convex_hull(std::move(targets));
    site.outline = enclosure_outline(site.hull, eps / 2.0);
  }
  std::stable_sort(sites.begin(), sites.end(),
                   [](const CombatSite& a, const CombatSite& b) { return a.centroid < b.centroid; });
  for (std::size_t k = 0; k < sites.size(); ++k) sites[k].id = static_cast<SiteId>(k);
  return sites;
}

std::vector<LongRangeAttack> detect_long_range(std::span<const CombatEvent> events, double range_threshold,
                                               const MatchLog& log, const Territory& territory,
                                               std::span<const CombatSite> sites) {
  std::vector<int> site_of(events.size(), -1);
  for (const CombatSite& site : sites)
    for (std::size_t i : site.members)
      if (i < site_of.size()) site_of[i] = site.id;

  const auto teams = log.unit_teams();
  // (attacker team, attacker landmark, target is a site?, site or landmark id)
  using Key = std::tuple<TeamId, LandmarkId, int, int>;
  std::map<Key, LongRangeAttack> groups;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const CombatEvent& e = events[i];
    if (!(dist(e.attacker_pos, e.target_pos) > range_threshold)) continue;
    const TeamId team = teams.at(e.attacker);
    const int target = site_of[i] >= 0 ? site_of[i] : territory.locate(e.target_pos);
    const Key key{team, territory.locate(e.attacker_pos), site_of[i] >= 0 ? 0 : 1, target};
    LongRangeAttack& attack = groups[key];
    attack.attacker_team = team;
    attack.from += e.attacker_pos;
    attack.to += e.target_pos;
    ++attack.count;
    attack.events.push_back(i);
  }

  std::vector<LongRangeAttack> out;
  out.reserve(groups.size());
  for (auto& [key, attack] : groups) {
    attack.from = attack.from / static_cast<double>(attack.count);
    attack.to = attack.to / static_cast<double>(attack.count);
    out.push_back(std::move(attack));
  }
  return out;
}

}  // namespace battleflow
