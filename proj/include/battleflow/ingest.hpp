#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "battleflow/geometry.hpp"

namespace battleflow {

using TeamId = int;

struct Team {
  TeamId id = 0;
  std::string color;  // "#rrggbb"
  std::optional<Vec2> base;
  std::vector<Vec2> spawn_points;

  friend bool operator==(const Team&, const Team&) = default;
};

struct Sample {
  double t = 0.0;
  Vec2 pos;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct UnitTrack {
  std::string unit_id;
  TeamId team = 0;
  std::vector<Sample> samples;  // strictly increasing t

  friend bool operator==(const UnitTrack&, const UnitTrack&) = default;
};

enum class CombatKind { hit, kill };

struct CombatEvent {
  double t = 0.0;
  std::string attacker;
  std::string target;
  Vec2 attacker_pos;
  Vec2 target_pos;
  CombatKind kind = CombatKind::hit;

  friend bool operator==(const CombatEvent&, const CombatEvent&) = default;
};

struct MatchLog {
  std::string map_name;
  Rect bounds;
  std::vector<Team> teams;
  std::vector<UnitTrack> units;
  std::vector<CombatEvent> combat_events;

  const Team* find_team(TeamId id) const;
  const UnitTrack* find_unit(std::string_view id) const;
  /// unit id -> team id
  std::unordered_map<std::string, TeamId> unit_teams() const;

  friend bool operator==(const MatchLog&, const MatchLog&) = default;
};

inline constexpr int kSchemaVersion = 1;

/// Parses and validates a telemetry document (schema version 1).
///
/// Samples may be given as `[t, x, y]` or `[t, [x, y]]`; unsorted samples
/// are re-sorted by time. Throws SchemaError for malformed or mistyped input
/// and ValidationError for invariant violations (unknown team, duplicate
/// ids, duplicate sample times, bad combat references).
MatchLog parse_match_log(std::string_view raw);

/// Canonical JSON text for a log. parse_match_log(serialize_match_log(x)) == x.
std::string serialize_match_log(const MatchLog& log);

struct ClampReport {
  std::size_t clamped_samples = 0;
  std::size_t clamped_event_positions = 0;
};

/// Projects every sample position and combat-event position that lies
/// outside the map bounds onto the nearest boundary point.
MatchLog clamp_to_bounds(const MatchLog& log, ClampReport* report = nullptr);

const char* to_string(CombatKind kind);

}  // namespace battleflow
