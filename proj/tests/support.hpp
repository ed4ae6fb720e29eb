#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "battleflow/ingest.hpp"
#include "battleflow/semantics.hpp"

namespace battleflow::testing {

// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool chance(double p) { return real(0.0, 1.0) < p; }
  Vec2 point(const Rect& r) { return {real(r.xmin, r.xmax), real(r.ymin, r.ymax)}; }
  Vec2 vec(double mag) { return {real(-mag, mag), real(-mag, mag)}; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline RepresentativeTrajectory make_rep(TeamId team, std::vector<LandmarkId> landmarks, int units,
                                         TimeSpan span = {0.0, 10.0}, std::string first_member = "u0") {
  RepresentativeTrajectory rep;
  rep.team = team;
  rep.landmarks = std::move(landmarks);
  for (std::size_t i = 0; i < rep.landmarks.size(); ++i) {
    const double f = rep.landmarks.size() > 1 ? static_cast<double>(i) / static_cast<double>(rep.landmarks.size() - 1) : 0.0;
    rep.landmark_times.push_back(span.start + f * (span.end - span.start));
  }
  rep.unit_count = units;
  rep.time_span = span;
  for (int k = 0; k < units; ++k) rep.member_ids.push_back(first_member + "_" + std::to_string(k));
  return rep;
}

// Landmark sequence with no two equal neighbours.
inline std::vector<LandmarkId> random_route(Gen& g, int n_landmarks, int min_len, int max_len) {
  std::vector<LandmarkId> out;
  const int len = g.integer(min_len, max_len);
  while (static_cast<int>(out.size()) < len) {
    const int id = g.integer(0, n_landmarks - 1);
    if (!out.empty() && out.back() == id) continue;
    out.push_back(id);
  }
  return out;
}

// Same, with all landmarks distinct.
inline std::vector<LandmarkId> random_simple_route(Gen& g, int n_landmarks, int min_len, int max_len) {
  std::vector<LandmarkId> pool(static_cast<std::size_t>(n_landmarks));
  for (int i = 0; i < n_landmarks; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::shuffle(pool.begin(), pool.end(), g.engine());
  pool.resize(static_cast<std::size_t>(std::min(n_landmarks, g.integer(min_len, max_len))));
  return pool;
}

inline MatchLog tiny_log() {
  MatchLog log;
  log.map_name = "tiny";
  log.bounds = {0, 0, 100, 100};
  log.teams = {Team{1, "#ff0000", Vec2{5, 5}, {Vec2{8, 8}}}, Team{2, "#0000ff", Vec2{95, 95}, {}}};
  UnitTrack a{"a", 1, {}};
  UnitTrack b{"b", 2, {}};
  for (int k = 0; k <= 20; ++k) {
    a.samples.push_back({double(k), {5.0 + 4.0 * k, 10.0 + (k > 10 ? 3.0 * (k - 10) : 0.0)}});
    b.samples.push_back({double(k), {95.0 - 4.0 * k, 90.0}});
  }
  log.units = {a, b};
  log.combat_events = {CombatEvent{5, "a", "b", {25, 10}, {75, 90}, CombatKind::hit}};
  return log;
}

}  // namespace battleflow::testing
