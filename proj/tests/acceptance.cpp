// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "battleflow/dump.hpp"
#include "battleflow/errors.hpp"
#include "battleflow/pipeline.hpp"
#include "battleflow/synthetic.hpp"
#include "support.hpp"

using namespace battleflow;
using battleflow::testing::Gen;
using battleflow::testing::make_rep;
using battleflow::testing::random_route;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

double angle_between(Vec2 a, Vec2 b) { return std::abs(std::atan2(cross(a, b), dot(a, b))); }

// Fourth-order central difference; exact for cubics up to rounding.
Vec2 derivative_fd(const HermiteSegment& c, double s) {
  const double h = 1e-3;
  return (8.0 * (c.at(s + h) - c.at(s - h)) - (c.at(s + 2 * h) - c.at(s - 2 * h))) / (12.0 * h);
}

// Kahn's algorithm over an edge list; false when nodes remain.
bool kahn_succeeds(const FlowGraph& g) {
  std::map<LandmarkId, int> indeg;
  std::multimap<LandmarkId, LandmarkId> out;
  for (LandmarkId v : g.nodes) indeg[v] = 0;
  for (const FlowEdge& e : g.edges) {
    ++indeg[e.to];
    out.insert({e.from, e.to});
  }
  std::vector<LandmarkId> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.push_back(v);
  std::size_t done = 0;
  while (!ready.empty()) {
    const LandmarkId v = ready.back();
    ready.pop_back();
    ++done;
    for (auto [it, end] = out.equal_range(v); it != end; ++it)
      if (--indeg[it->second] == 0) ready.push_back(it->second);
  }
  return done == indeg.size();
}

bool order_respects_edges(const FlowGraph& g, const std::vector<LandmarkId>& order) {
  if (order.size() != g.nodes.size()) return false;
  std::map<LandmarkId, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  for (const FlowEdge& e : g.edges)
    if (!rank.contains(e.from) || !rank.contains(e.to) || rank[e.from] >= rank[e.to]) return false;
  return true;
}

void check_conservation(const std::vector<FlowGraph>& graphs, Outcome& o, const std::string& where) {
  for (const FlowGraph& g : graphs) {
    std::map<LandmarkId, int> in, out;
    for (const FlowEdge& e : g.edges) {
      in[e.to] += e.weight;
      out[e.from] += e.weight;
    }
    for (LandmarkId v : g.nodes) {
      if (v == g.root) continue;
      const int term = g.termination.contains(v) ? g.termination.at(v) : 0;
      if (in[v] != out[v] + term)
        o.fail(where + " team " + std::to_string(g.team) + " root " + std::to_string(g.root) + " node " +
               std::to_string(v));
    }
  }
}

void check_acyclic(const std::vector<FlowGraph>& graphs, Outcome& o, const std::string& where) {
  for (const FlowGraph& g : graphs) {
    if (!kahn_succeeds(g)) o.fail(where + ": cycle under root " + std::to_string(g.root));
    try {
      if (!order_respects_edges(g, g.topological_order())) o.fail(where + ": bad topological order");
    } catch (const Error& e) {
      o.fail(where + ": " + e.what());
    }
  }
}

std::string all_dumps(const PipelineResult& r) {
  return territory_json(*r.territory).dump(1) + semantics_json(r.semantic, r.representatives).dump(1) +
         flowgraphs_json(r.graphs, r.positions).dump(1) + layout_json(r.layouts).dump(1) +
         combat_json(r.sites, r.attacks).dump(1);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI twice on the same input and compares the SVG and every dump
// byte for byte.
bool cli_runs_identical(const MatchLog& log, std::string& why) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "battleflow-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  std::ofstream(dir / "match.json") << serialize_match_log(log);
  const char* stages[] = {"territory", "semantics", "flowgraphs", "layout", "combat"};
  for (const char* run : {"a", "b"}) {
    std::string cmd = "BATTLEFLOW_NO_COLOR=1 \"" BATTLEFLOW_CLI "\" render \"" + (dir / "match.json").string() +
                      "\" -o \"" + (dir / run / "map.svg").string() + "\"";
    for (const char* s : stages) cmd += std::string(" --dump ") + s;
    cmd += " >/dev/null";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      why = "cli run failed";
      return false;
    }
  }
  std::vector<std::string> files{"map.svg"};
  for (const char* s : stages) files.push_back(std::string(s) + ".json");
  for (const std::string& f : files) {
    const std::string a = read_file(dir / "a" / f), b = read_file(dir / "b" / f);
    if (a.empty() || a != b) {
      why = "cli output differs: " + f;
      return false;
    }
  }
  fs::remove_all(dir);
  return true;
}

// Rep sets with revisits, split the way the pipeline splits them.
std::vector<RepresentativeTrajectory> backtracking_pieces(Gen& g, TeamId team, int routes) {
  std::vector<RepresentativeTrajectory> pieces;
  for (int k = 0; k < routes; ++k) {
    auto route = random_route(g, 6, 2, 16);
    auto rep = make_rep(team, route, g.integer(1, 4), {g.real(0, 100), 0.0}, "b" + std::to_string(team) + "_" + std::to_string(k));
    rep.time_span.end = rep.time_span.start + g.real(1, 50);
    const auto split = split_at_revisit(rep);
    pieces.insert(pieces.end(), split.begin(), split.end());
  }
  return pieces;
}

}  // namespace

int main() {
  std::map<int, Outcome> results;
  const auto line = [&](int id, const char* name) {
    const Outcome& o = results[id];
    std::printf("%s %2d %s: %s%s%s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                o.pass ? "" : " | first failure: ", o.pass ? "" : o.first_failure.c_str());
  };

  // Corpus: 200 synthetic matches, 2 teams x 15 units x <= 1000 samples.
  const int corpus_size = 200;
  double pipeline_seconds = 0.0;
  std::size_t graphs_seen = 0, nodes_checked = 0, bands_checked = 0, width_samples = 0, located = 0;
  std::size_t origin_pairs = 0, determinism_runs = 0;
  Gen locate_gen(9001);
  for (int seed = 1; seed <= corpus_size; ++seed) {
    const MatchLog log = synthesize_match(static_cast<std::uint64_t>(seed));
    const std::string where = "seed " + std::to_string(seed);

    const auto t0 = Clock::now();
    const PipelineResult r = run_pipeline(log, {});
    pipeline_seconds += seconds_since(t0);
    graphs_seen += r.graphs.size();

    check_conservation(r.graphs, results[1], where);
    check_acyclic(r.graphs, results[2], where);

    // C1 direction at every node of every layout.
    for (const FlowLayout& l : r.layouts) {
      for (const NodeFrame& f : l.frames) {
        ++nodes_checked;
        for (const SplineBand& b : l.bands) {
          if (b.from != f.landmark && b.to != f.landmark) continue;
          const double s = b.from == f.landmark ? 0.0 : 1.0;
          const Vec2 d = derivative_fd(b.curve(), s);
          if (norm(d) == 0.0 || angle_between(d, f.tangent) > 1e-6)
            results[5].fail(where + " band " + std::to_string(b.from) + "-" + std::to_string(b.to) + " at node " +
                            std::to_string(f.landmark));
        }
      }
    }

    // Width encoding against independently derived w_max and max_troop.
    int max_troop = 1;
    std::map<TeamId, int> team_size;
    for (const UnitTrack& u : log.units) max_troop = std::max(max_troop, ++team_size[u.team]);
    // A unit split into several episodes can count more than once.
    for (const FlowGraph& fg : r.graphs)
      for (const FlowEdge& e : fg.edges) max_troop = std::max(max_troop, e.weight);
    for (const RepresentativeTrajectory& rep : r.representatives) max_troop = std::max(max_troop, rep.unit_count);
    const double w_max = 0.025 * std::hypot(log.bounds.width(), log.bounds.height());
    for (const FlowLayout& l : r.layouts) {
      for (const SplineBand& b : l.bands) {
        ++bands_checked;
        const double want = w_max * b.weight / max_troop;
        if (std::abs(b.width - want) > 1e-9) results[7].fail(where + ": band width off the formula");
        for (int i = 0; i < 20; ++i) {
          const auto [left, right] = ribbon_edges_at(b, i / 19.0);
          ++width_samples;
          if (std::abs(dist(left, right) - want) > 1e-9) results[7].fail(where + ": ribbon width varies");
        }
      }
    }

    // Legacy versus flow origin totals.
    PipelineConfig legacy;
    legacy.mode = RenderMode::legacy;
    const auto flow_totals = origin_totals(r.scene);
    const auto legacy_totals = origin_totals(run_pipeline(log, legacy).scene);
    origin_pairs += flow_totals.size();
    if (flow_totals != legacy_totals || flow_totals.empty()) results[8].fail(where);

    // locate against a brute-force nearest-site scan.
    const Territory& t = *r.territory;
    for (int q = 0; q < 10000; ++q) {
      const Vec2 p = locate_gen.point(t.bounds());
      LandmarkId best = 0;
      for (const Landmark& lm : t.landmarks())
        if (dist2(p, lm.site) < dist2(p, t.landmark(best).site)) best = lm.id;
      ++located;
      if (t.locate(p) != best) {
        results[9].fail(where + " point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
        break;
      }
    }

    // Determinism: second in-process run on the first ten logs.
    if (seed <= 10) {
      const PipelineResult again = run_pipeline(log, {});
      ++determinism_runs;
      if (again.svg != r.svg || all_dumps(again) != all_dumps(r)) results[10].fail(where);
    }
  }

  // Adversarial backtracking: synthetic matches that double back constantly,
  // plus rep sets whose routes revisit landmarks.
  std::size_t adversarial_graphs = 0;
  for (int seed = 1; seed <= 30; ++seed) {
    SyntheticParams p;
    p.backtrack_probability = 0.9;
    p.max_samples = 600;
    const PipelineResult r = run_pipeline(synthesize_match(static_cast<std::uint64_t>(5000 + seed), p), {});
    adversarial_graphs += r.graphs.size();
    check_conservation(r.graphs, results[1], "backtracking seed " + std::to_string(seed));
    check_acyclic(r.graphs, results[2], "backtracking seed " + std::to_string(seed));
  }
  Gen adversary(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto pieces = backtracking_pieces(adversary, 1, adversary.integer(2, 14));
    const auto graphs = build_flow_graphs(pieces);
    adversarial_graphs += graphs.size();
    check_conservation(graphs, results[1], "backtracking set " + std::to_string(trial));
    check_acyclic(graphs, results[2], "backtracking set " + std::to_string(trial));
  }

  {
    std::ostringstream d;
    d.precision(3);
    d << corpus_size << " logs, " << graphs_seen << " graphs + " << adversarial_graphs
      << " adversarial graphs, pipeline " << std::fixed << pipeline_seconds << " s";
    results[1].detail = d.str();
    if (pipeline_seconds >= 30.0) results[1].fail("corpus took " + std::to_string(pipeline_seconds) + " s");
    results[2].detail = std::to_string(graphs_seen + adversarial_graphs) + " graphs topologically sorted";
  }

  // Transition counts against a flat scan per (team, origin) bucket.
  {
    Gen g(31);
    const int sets = 100;
    for (int trial = 0; trial < sets; ++trial) {
      std::vector<RepresentativeTrajectory> reps;
      for (TeamId team : {1, 2}) {
        auto pieces = backtracking_pieces(g, team, g.integer(1, 12));
        reps.insert(reps.end(), pieces.begin(), pieces.end());
      }
      const double window = g.chance(0.5) ? kUnboundedWindow : g.real(1, 60);
      using Key = std::tuple<TeamId, LandmarkId, LandmarkId, LandmarkId>;
      std::map<Key, int> flat, merged;
      for (const auto& rep : reps)
        for (std::size_t i = 0; i + 1 < rep.landmarks.size(); ++i)
          flat[{rep.team, rep.landmarks.front(), rep.landmarks[i], rep.landmarks[i + 1]}] += rep.unit_count;
      for (const FlowGraph& fg : build_flow_graphs(reps, window))
        for (const FlowEdge& e : fg.edges) merged[{fg.team, fg.root, e.from, e.to}] += e.weight;
      if (flat != merged) results[3].fail("set " + std::to_string(trial));
    }
    results[3].detail = std::to_string(sets) + " rep sets with revisits, random time windows";
  }

  // Hermite endpoints and tangents.
  {
    Gen g(41);
    double worst = 0.0;
    const int sets = 1000;
    for (int i = 0; i < sets; ++i) {
      const HermiteSegment c{g.vec(500), g.vec(300), g.vec(500), g.vec(300)};
      if (c.at(0.0) != c.p0 || c.at(1.0) != c.p1) results[4].fail("endpoint mismatch in set " + std::to_string(i));
      for (const auto& [s, m] : {std::pair{0.0, c.m0}, std::pair{1.0, c.m1}}) {
        if (norm(m) < 1e-3) continue;
        const double rel = norm(derivative_fd(c, s) - m) / norm(m);
        worst = std::max(worst, rel);
        if (rel > 1e-6) results[4].fail("tangent mismatch in set " + std::to_string(i));
      }
    }
    std::ostringstream d;
    d << sets << " control sets, worst relative tangent error " << worst;
    results[4].detail = d.str();
  }

  results[5].detail = std::to_string(nodes_checked) + " nodes, every incident band";

  // Offset stacking.
  {
    const double r = 10;
    const auto at = [&](double deg) {
      return Vec2{r * std::cos(-deg * std::acos(-1.0) / 180), r * std::sin(-deg * std::acos(-1.0) / 180)};
    };
    const std::vector<Vec2> pos{{0, 0}, at(30), at(60), at(90)};
    const NodeFrame f{0, {0, 0}, {1, 0}, {0, 1}};
    const std::vector<StackEntry> fixture{{1, 1.0}, {2, 2.0}, {3, 3.0}};
    if (stack_offsets(f, fixture, pos) != std::vector<double>{-2.5, -1.0, 1.5})
      results[6].fail("{1, 2, 3} fixture");

    Gen g(61);
    const int sets = 500;
    for (int trial = 0; trial < sets; ++trial) {
      const int k = g.integer(1, 8);
      std::vector<Vec2> p{{0, 0}};
      std::vector<StackEntry> e;
      for (int i = 1; i <= k; ++i) {
        p.push_back(g.vec(10));
        // Multiples of 1/64 keep every partial sum exact.
        e.push_back({i, g.integer(1, 640) / 64.0});
      }
      const NodeFrame nf{0, {0, 0}, normalized(g.vec(1)), {}};
      const auto off = stack_offsets(nf, e, p);
      std::vector<std::pair<double, double>> iv;
      double total = 0;
      for (std::size_t i = 0; i < e.size(); ++i) {
        iv.push_back({off[i] - e[i].width / 2, off[i] + e[i].width / 2});
        total += e[i].width;
      }
      std::sort(iv.begin(), iv.end());
      bool ok = iv.front().first == -total / 2 && iv.back().second == total / 2;
      for (std::size_t i = 1; i < iv.size(); ++i) ok = ok && iv[i].first == iv[i - 1].second;
      if (!ok) results[6].fail("random set " + std::to_string(trial));
    }
    results[6].detail = "fixture (-2.5, -1, +1.5) and " + std::to_string(sets) + " random width sets, exact";
  }

  results[7].detail = std::to_string(bands_checked) + " bands, " + std::to_string(width_samples) + " samples";
  results[8].detail = std::to_string(corpus_size) + " logs, " + std::to_string(origin_pairs) + " (team, origin) pairs";
  results[9].detail = std::to_string(located) + " points over " + std::to_string(corpus_size) + " maps";

  {
    std::string why;
    if (!cli_runs_identical(synthesize_match(3), why)) results[10].fail(why);
    results[10].detail = std::to_string(determinism_runs) + " in-process reruns, 1 pair of CLI runs, SVG and 5 dumps";
  }

  // Desk-scale run: 30 units, exactly 1000 samples each, from JSON text to SVG.
  {
    SyntheticParams p;
    p.units_per_team = 15;
    p.min_samples = 1000;
    p.max_samples = 1000;
    const std::string text = serialize_match_log(synthesize_match(424242, p));
    const auto t0 = Clock::now();
    const PipelineResult r = run_pipeline(parse_match_log(text), {});
    const std::string dumps = all_dumps(r);
    const double elapsed = seconds_since(t0);
    std::size_t samples = 0;
    for (const UnitTrack& u : r.log.units) samples += u.samples.size();
    std::ostringstream d;
    d.precision(3);
    d << r.log.units.size() << " units, " << samples << " samples, " << std::fixed << elapsed << " s";
    results[11].detail = d.str();
    if (r.log.units.size() != 30 || samples != 30000) results[11].fail("wrong log shape");
    if (elapsed >= 5.0 || r.svg.empty() || dumps.empty()) results[11].fail("took " + std::to_string(elapsed) + " s");
  }

  line(1, "flow conservation");
  line(2, "acyclicity");
  line(3, "transition counts");
  line(4, "hermite endpoints and tangents");
  line(5, "C1 direction at nodes");
  line(6, "offset stacking");
  line(7, "width encoding");
  line(8, "legacy/flow origin totals");
  line(9, "territory locate");
  line(10, "end-to-end determinism");
  line(11, "desk-scale performance");

  bool all = true;
  for (const auto& [id, o] : results) all = all && o.pass;
  return all ? 0 : 1;
}
