#include "battleflow/semantics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

namespace battleflow {

std::vector<LandmarkId> SemanticTrajectory::landmarks() const {
  std::vector<LandmarkId> out;
  out.reserve(visits.size());
  for (const Visit& v : visits) out.push_back(v.landmark);
  return out;
}

SemanticTrajectory semantify(const UnitTrack& track, const Territory& territory) {
  SemanticTrajectory st{track.unit_id, track.team, {}};
  for (const Sample& s : track.samples) {
    const LandmarkId id = territory.locate(s.pos);
    if (!st.visits.empty() && st.visits.back().landmark == id) {
      st.visits.back().exit_t = s.t;
    } else {
      st.visits.push_back({id, s.t, s.t});
    }
  }
  return st;
}

std::vector<SemanticTrajectory> split_episodes(const SemanticTrajectory& st, double idle_gap) {
  std::vector<SemanticTrajectory> episodes;
  SemanticTrajectory current{st.unit_id, st.team, {}};
  for (const Visit& v : st.visits) {
    if (v.exit_t - v.enter_t > idle_gap) {
      current.visits.push_back({v.landmark, v.enter_t, v.enter_t});
      episodes.push_back(std::move(current));
      current = SemanticTrajectory{st.unit_id, st.team, {{v.landmark, v.exit_t, v.exit_t}}};
    } else {
      current.visits.push_back(v);
    }
  }
  if (!current.visits.empty()) episodes.push_back(std::move(current));
  return episodes;
}

std::vector<TrajectoryGroup> group_by_od(std::span<const SemanticTrajectory> trajs) {
  std::map<std::tuple<TeamId, LandmarkId, LandmarkId>, TrajectoryGroup> groups;
  for (const SemanticTrajectory& st : trajs) {
    if (st.visits.size() < 2) continue;
    const LandmarkId o = st.visits.front().landmark;
    const LandmarkId d = st.visits.back().landmark;
    auto [it, inserted] = groups.try_emplace({st.team, o, d});
    if (inserted) {
      it->second.team = st.team;
      it->second.origin = o;
      it->second.destination = d;
    }
    it->second.members.push_back(st);
  }
  std::vector<TrajectoryGroup> out;
  out.reserve(groups.size());
  for (auto& [key, group] : groups) out.push_back(std::move(group));
  return out;
}

double similarity(std::span<const LandmarkId> a, std::span<const LandmarkId> b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  // Two-row Levenshtein.
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitute});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(longest);
}

namespace {

constexpr double kTieEps = 1e-12;

std::size_t medoid_of(const std::vector<std::size_t>& cluster, const std::vector<std::vector<double>>& dist,
                      const std::vector<std::vector<LandmarkId>>& routes,
                      const std::vector<SemanticTrajectory>& members) {
  std::size_t best = cluster.front();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i : cluster) {
    double sum = 0.0;
    for (std::size_t j : cluster) sum += dist[i][j];
    bool better = sum < best_sum - kTieEps;
    if (!better && sum <= best_sum + kTieEps) {
      better = std::tie(routes[i], members[i].unit_id) < std::tie(routes[best], members[best].unit_id);
    }
    if (better) {
      best = i;
      best_sum = std::min(sum, best_sum);
    }
  }
  return best;
}

}  // namespace

std::vector<RepresentativeTrajectory> cluster_routes(const TrajectoryGroup& group, double tau) {
  const auto& members = group.members;
  const std::size_t n = members.size();
  if (n == 0) return {};

  std::vector<std::vector<LandmarkId>> routes;
  routes.reserve(n);
  for (const auto& m : members) routes.push_back(m.landmarks());

  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i][j] = dist[j][i] = similarity(routes[i], routes[j]);

  // Active clusters stay ordered by their smallest member index; `linkage`
  // holds the complete-linkage distance between active clusters.
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  std::vector<std::vector<double>> linkage = dist;
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t x = 0; x < active.size(); ++x)
      for (std::size_t y = x + 1; y < active.size(); ++y)
        if (linkage[active[x]][active[y]] < best) {
          best = linkage[active[x]][active[y]];
          ba = x;
          bb = y;
        }
    if (best > tau) break;

    const std::size_t a = active[ba];
    const std::size_t b = active[bb];
    for (std::size_t c : active) {
      const double merged = std::max(linkage[a][c], linkage[b][c]);
      linkage[a][c] = linkage[c][a] = merged;
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    std::sort(clusters[a].begin(), clusters[a].end());
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bb));
  }

  std::vector<RepresentativeTrajectory> reps;
  for (std::size_t c : active) {
    const auto& cluster = clusters[c];
    const std::size_t medoid = medoid_of(cluster, dist, routes, members);

    RepresentativeTrajectory rep;
    rep.team = group.team;
    rep.landmarks = routes[medoid];
    for (const Visit& v : members[medoid].visits) rep.landmark_times.push_back(v.enter_t);
    rep.unit_count = static_cast<int>(cluster.size());
    rep.time_span = members[cluster.front()].time_span();
    for (std::size_t i : cluster) {
      rep.time_span = rep.time_span.united(members[i].time_span());
      rep.member_ids.push_back(members[i].unit_id);
    }
    std::sort(rep.member_ids.begin(), rep.member_ids.end());
    reps.push_back(std::move(rep));
  }
  return reps;
}

}  // namespace battleflow
