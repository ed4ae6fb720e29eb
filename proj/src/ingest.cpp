#include "battleflow/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

#include "battleflow/errors.hpp"

namespace battleflow {

using nlohmann::json;

namespace {

// Typed accessors that report the JSON path of the offending value.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  bool has(const char* key) const { return value_.contains(key); }

  Node at(const char* key) const {
    expect_object();
    auto it = value_.find(key);
    if (it == value_.end()) throw SchemaError(path_, std::string("missing field '") + key + "'");
    return Node(*it, path_ + "." + key);
  }

  Node at(std::size_t index) const { return Node(value_[index], path_ + "[" + std::to_string(index) + "]"); }

  std::size_t array_size() const {
    if (!value_.is_array()) throw SchemaError(path_, "expected array");
    return value_.size();
  }

  void expect_object() const {
    if (!value_.is_object()) throw SchemaError(path_, "expected object");
  }

  double number() const {
    if (!value_.is_number()) throw SchemaError(path_, "expected number");
    return value_.get<double>();
  }

  long long integer() const {
    if (!value_.is_number_integer()) throw SchemaError(path_, "expected integer");
    return value_.get<long long>();
  }

  std::string string() const {
    if (!value_.is_string()) throw SchemaError(path_, "expected string");
    return value_.get<std::string>();
  }

  Vec2 point() const {
    if (array_size() != 2) throw SchemaError(path_, "expected [x, y]");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }

 private:
  const json& value_;
  std::string path_;
};

bool is_hex_color(const std::string& s) {
  return s.size() == 7 && s[0] == '#' &&
         std::all_of(s.begin() + 1, s.end(), [](unsigned char c) { return std::isxdigit(c) != 0; });
}

Team parse_team(const Node& n) {
  Team team;
  const long long id = n.at("id").integer();
  if (id < 0 || id > 1'000'000) throw SchemaError(n.path() + ".id", "team id out of range");
  team.id = static_cast<TeamId>(id);
  team.color = n.at("color").string();
  if (n.has("base") && !n.raw()["base"].is_null()) team.base = n.at("base").point();
  if (n.has("spawns")) {
    const Node spawns = n.at("spawns");
    for (std::size_t i = 0; i < spawns.array_size(); ++i) team.spawn_points.push_back(spawns.at(i).point());
  }
  return team;
}

Sample parse_sample(const Node& n) {
  const std::size_t size = n.array_size();
  if (size == 3) return {n.at(std::size_t{0}).number(), {n.at(1).number(), n.at(2).number()}};
  if (size == 2) return {n.at(std::size_t{0}).number(), n.at(1).point()};
  throw SchemaError(n.path(), "expected [t, x, y] or [t, [x, y]]");
}

UnitTrack parse_unit(const Node& n) {
  UnitTrack unit;
  unit.unit_id = n.at("id").string();
  const long long team = n.at("team").integer();
  if (team < 0 || team > 1'000'000) throw SchemaError(n.path() + ".team", "team id out of range");
  unit.team = static_cast<TeamId>(team);
  const Node samples = n.at("samples");
  for (std::size_t i = 0; i < samples.array_size(); ++i) unit.samples.push_back(parse_sample(samples.at(i)));
  return unit;
}

CombatEvent parse_event(const Node& n) {
  CombatEvent e;
  e.t = n.at("t").number();
  e.attacker = n.at("attacker").string();
  e.target = n.at("target").string();
  e.attacker_pos = n.at("attacker_pos").point();
  e.target_pos = n.at("target_pos").point();
  const std::string kind = n.at("kind").string();
  if (kind == "hit") {
    e.kind = CombatKind::hit;
  } else if (kind == "kill") {
    e.kind = CombatKind::kill;
  } else {
    throw SchemaError(n.path() + ".kind", "expected \"hit\" or \"kill\"");
  }
  return e;
}

void validate(MatchLog& log) {
  if (!(log.bounds.width() > 0.0) || !(log.bounds.height() > 0.0))
    throw ValidationError("map", "bounds must have positive width and height");

  std::set<TeamId> team_ids;
  for (const Team& team : log.teams) {
    const std::string subject = "team " + std::to_string(team.id);
    if (!team_ids.insert(team.id).second) throw ValidationError(subject, "duplicate team id");
    if (!is_hex_color(team.color)) throw ValidationError(subject, "color must be #rrggbb");
    if (team.base && !log.bounds.contains(*team.base)) throw ValidationError(subject, "base outside map bounds");
    for (Vec2 p : team.spawn_points)
      if (!log.bounds.contains(p)) throw ValidationError(subject, "spawn point outside map bounds");
  }

  std::set<std::string> unit_ids;
  for (UnitTrack& unit : log.units) {
    const std::string subject = "unit " + unit.unit_id;
    if (!unit_ids.insert(unit.unit_id).second) throw ValidationError(subject, "duplicate unit id");
    if (!team_ids.contains(unit.team))
      throw ValidationError(subject, "references unknown team " + std::to_string(unit.team));
    if (unit.samples.empty()) throw ValidationError(subject, "has no samples");
    std::stable_sort(unit.samples.begin(), unit.samples.end(),
                     [](const Sample& a, const Sample& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < unit.samples.size(); ++i)
      if (unit.samples[i].t == unit.samples[i - 1].t)
        throw ValidationError(subject, "duplicate sample time " + std::to_string(unit.samples[i].t));
  }

  const auto teams_of = log.unit_teams();
  for (std::size_t i = 0; i < log.combat_events.size(); ++i) {
    const CombatEvent& e = log.combat_events[i];
    const std::string subject = "event " + std::to_string(i);
    const auto attacker = teams_of.find(e.attacker);
    if (attacker == teams_of.end()) throw ValidationError(subject, "unknown attacker " + e.attacker);
    const auto target = teams_of.find(e.target);
    if (target == teams_of.end()) throw ValidationError(subject, "unknown target " + e.target);
    if (e.attacker == e.target) throw ValidationError(subject, "attacker and target are the same unit");
    if (attacker->second == target->second) throw ValidationError(subject, "attacker and target on the same team");
  }
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

const Team* MatchLog::find_team(TeamId id) const {
  auto it = std::find_if(teams.begin(), teams.end(), [id](const Team& t) { return t.id == id; });
  return it == teams.end() ? nullptr : &*it;
}

const UnitTrack* MatchLog::find_unit(std::string_view id) const {
  auto it = std::find_if(units.begin(), units.end(), [id](const UnitTrack& u) { return u.unit_id == id; });
  return it == units.end() ? nullptr : &*it;
}

std::unordered_map<std::string, TeamId> MatchLog::unit_teams() const {
  std::unordered_map<std::string, TeamId> out;
  for (const UnitTrack& u : units) out.emplace(u.unit_id, u.team);
  return out;
}

const char* to_string(CombatKind kind) { return kind == CombatKind::kill ? "kill" : "hit"; }

MatchLog parse_match_log(std::string_view raw) {
  json doc;
  try {
    doc = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }

  const Node root(doc, "$");
  root.expect_object();
  if (root.has("schema") && root.at("schema").integer() != kSchemaVersion)
    throw SchemaError("$.schema", "unsupported schema version");

  MatchLog log;
  const Node map = root.at("map");
  log.map_name = map.at("name").string();
  const Node bounds = map.at("bounds");
  if (bounds.array_size() != 4) throw SchemaError(bounds.path(), "expected [xmin, ymin, xmax, ymax]");
  log.bounds = {bounds.at(std::size_t{0}).number(), bounds.at(1).number(), bounds.at(2).number(),
                bounds.at(3).number()};

  const Node teams = root.at("teams");
  for (std::size_t i = 0; i < teams.array_size(); ++i) log.teams.push_back(parse_team(teams.at(i)));

  const Node units = root.at("units");
  for (std::size_t i = 0; i < units.array_size(); ++i) log.units.push_back(parse_unit(units.at(i)));

  if (root.has("events")) {
    const Node events = root.at("events");
    for (std::size_t i = 0; i < events.array_size(); ++i) log.combat_events.push_back(parse_event(events.at(i)));
  }

  validate(log);
  return log;
}

std::string serialize_match_log(const MatchLog& log) {
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["map"] = {{"name", log.map_name},
                {"bounds", {log.bounds.xmin, log.bounds.ymin, log.bounds.xmax, log.bounds.ymax}}};

  json teams = json::array();
  for (const Team& team : log.teams) {
    json spawns = json::array();
    for (Vec2 p : team.spawn_points) spawns.push_back(point_json(p));
    teams.push_back({{"id", team.id},
                     {"color", team.color},
                     {"base", team.base ? point_json(*team.base) : json(nullptr)},
                     {"spawns", std::move(spawns)}});
  }
  doc["teams"] = std::move(teams);

  json units = json::array();
  for (const UnitTrack& unit : log.units) {
    json samples = json::array();
    for (const Sample& s : unit.samples) samples.push_back({s.t, s.pos.x, s.pos.y});
    units.push_back({{"id", unit.unit_id}, {"team", unit.team}, {"samples", std::move(samples)}});
  }
  doc["units"] = std::move(units);

  json events = json::array();
  for (const CombatEvent& e : log.combat_events) {
    events.push_back({{"t", e.t},
                      {"attacker", e.attacker},
                      {"target", e.target},
                      {"attacker_pos", point_json(e.attacker_pos)},
                      {"target_pos", point_json(e.target_pos)},
                      {"kind", to_string(e.kind)}});
  }
  doc["events"] = std::move(events);
  return doc.dump(1);
}

MatchLog clamp_to_bounds(const MatchLog& log, ClampReport* report) {
  MatchLog out = log;
  ClampReport counts;
  const auto clamp = [&](Vec2& p, std::size_t& counter) {
    const Vec2 c = out.bounds.clamp(p);
    if (c != p) {
      p = c;
      ++counter;
    }
  };
  for (UnitTrack& unit : out.units)
    for (Sample& s : unit.samples) clamp(s.pos, counts.clamped_samples);
  for (CombatEvent& e : out.combat_events) {
    clamp(e.attacker_pos, counts.clamped_event_positions);
    clamp(e.target_pos, counts.clamped_event_positions);
  }
  if (report) *report = counts;
  return out;
}

}  // namespace battleflow
