#include "battleflow/synthetic.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>

namespace battleflow {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

struct Waypoint {
  Vec2 pos;
  double dwell = 0.0;
};

constexpr std::array<const char*, 4> kColors = {"#c0392b", "#2a6fb0", "#2e8b57", "#8e44ad"};

}  // namespace

MatchLog synthesize_match(std::uint64_t seed, const SyntheticParams& params) {
  Rng rng(seed);
  const double S = params.map_size;
  MatchLog log;
  log.map_name = "synthetic-" + std::to_string(seed);
  log.bounds = {0.0, 0.0, S, S};

  const std::array<Vec2, 4> corners = {Vec2{0.1 * S, 0.1 * S}, Vec2{0.9 * S, 0.9 * S}, Vec2{0.9 * S, 0.1 * S},
                                       Vec2{0.1 * S, 0.9 * S}};
  const int team_count = std::clamp(params.teams, 1, 4);
  for (int k = 0; k < team_count; ++k) {
    Team team;
    team.id = k + 1;
    team.color = kColors[static_cast<std::size_t>(k)];
    team.base = corners[static_cast<std::size_t>(k)];
    for (int s = 0; s < 3; ++s)
      team.spawn_points.push_back(log.bounds.clamp(*team.base + Vec2{rng.uniform(-0.06, 0.06) * S, rng.uniform(-0.06, 0.06) * S}));
    log.teams.push_back(team);
  }

  const auto random_point = [&](Vec2 centre, double spread) {
    return log.bounds.clamp(centre + Vec2{rng.uniform(-spread, spread), rng.uniform(-spread, spread)});
  };

  for (const Team& team : log.teams) {
    const Vec2 base = *team.base;
    const Vec2 centre{S / 2.0, S / 2.0};
    // A few corridors sharing a first leg out of the base, then branching.
    const Vec2 exit = random_point(base + (centre - base) * 0.3, 0.05 * S);
    std::vector<std::vector<Vec2>> corridors;
    const int corridor_count = 3 + rng.index(2);
    for (int c = 0; c < corridor_count; ++c) {
      std::vector<Vec2> path{exit};
      const int legs = 2 + rng.index(3);
      Vec2 at = exit;
      for (int l = 0; l < legs; ++l) {
        at = random_point(at + (centre - base) * rng.uniform(0.15, 0.45), 0.18 * S);
        path.push_back(at);
      }
      corridors.push_back(std::move(path));
    }

    for (int u = 0; u < params.units_per_team; ++u) {
      UnitTrack unit;
      unit.unit_id = "t" + std::to_string(team.id) + "u" + std::to_string(u);
      unit.team = team.id;

      std::vector<Waypoint> plan;
      const auto& corridor = corridors[static_cast<std::size_t>(rng.index(corridor_count))];
      for (std::size_t i = 0; i < corridor.size(); ++i) {
        plan.push_back({random_point(corridor[i], 0.01 * S), rng.chance(0.25) ? rng.uniform(10.0, 150.0) : 0.0});
        if (i >= 2 && rng.chance(params.backtrack_probability)) {
          plan.push_back({random_point(corridor[i - 2], 0.01 * S), 0.0});
          plan.push_back({random_point(corridor[i], 0.01 * S), 0.0});
        }
      }

      const int lo = params.min_samples < 0 ? params.max_samples / 2 : std::min(params.min_samples, params.max_samples);
      const int n = std::max(2, lo + rng.index(std::max(1, params.max_samples - lo + 1)));
      const double speed = rng.uniform(5.0, 11.0) * S / 1000.0;
      const double dt = 1.0;
      Vec2 pos = team.spawn_points[static_cast<std::size_t>(rng.index(3))];
      std::size_t target = 0;
      double dwell_left = 0.0;
      for (int k = 0; k < n; ++k) {
        const Vec2 jitter{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
        unit.samples.push_back({k * dt, log.bounds.clamp(pos + jitter * (S / 1000.0))});
        if (dwell_left > 0.0) {
          dwell_left -= dt;
          continue;
        }
        if (target >= plan.size()) continue;
        const Vec2 goal = plan[target].pos;
        const double step = speed * dt;
        if (dist(pos, goal) <= step) {
          pos = goal;
          dwell_left = plan[target].dwell;
          ++target;
        } else {
          pos += normalized(goal - pos) * step;
        }
      }
      log.units.push_back(std::move(unit));
    }
  }

  if (team_count > 1 && !log.units.empty()) {
    for (int e = 0; e < params.events; ++e) {
      const UnitTrack& a = log.units[static_cast<std::size_t>(rng.index(static_cast<int>(log.units.size())))];
      const std::size_t k = static_cast<std::size_t>(rng.index(static_cast<int>(a.samples.size())));
      const UnitTrack* best = nullptr;
      double best_d = std::numeric_limits<double>::infinity();
      for (const UnitTrack& b : log.units) {
        if (b.team == a.team || b.samples.size() <= k) continue;
        const double d = dist(a.samples[k].pos, b.samples[k].pos);
        if (d < best_d) {
          best_d = d;
          best = &b;
        }
      }
      if (!best) continue;
      CombatEvent ev;
      ev.t = a.samples[k].t;
      ev.attacker = a.unit_id;
      ev.target = best->unit_id;
      ev.attacker_pos = a.samples[k].pos;
      ev.target_pos = best->samples[k].pos;
      ev.kind = rng.chance(0.1) ? CombatKind::kill : CombatKind::hit;
      log.combat_events.push_back(std::move(ev));
    }
  }
  return log;
}

}  // namespace battleflow
