// battleflow: render battle maps from match telemetry.
//
//   battleflow validate match.json
//   battleflow render match.json -o map.svg [--legacy-arrows] [--dump flowgraphs] ...
//
// Exit status: 0 success, 1 invalid input data, 2 I/O failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "battleflow/dump.hpp"
#include "battleflow/errors.hpp"
#include "battleflow/pipeline.hpp"

namespace fs = std::filesystem;
using namespace battleflow;

namespace {

constexpr int kExitData = 1;
constexpr int kExitIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool use_color() { return std::getenv("BATTLEFLOW_NO_COLOR") == nullptr && isatty(STDERR_FILENO); }

void log_line(const char* level, const char* color, const std::string& message) {
  if (use_color()) {
    std::cerr << color << level << "\033[0m: " << message << '\n';
  } else {
    std::cerr << level << ": " << message << '\n';
  }
}

void warn(const std::string& m) { log_line("warning", "\033[33m", m); }
void error(const std::string& m) { log_line("error", "\033[31m", m); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())))
    throw IoError("cannot write " + path.string());
}

double parse_window(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw std::invalid_argument("time window must be a number or 'inf'");
  return v;
}

struct RenderOptions {
  std::string input;
  std::string output;
  std::vector<std::string> dumps;
  std::string dump_dir;
  std::string flowgraphs;
  std::string time_window = "inf";
  double cell_radius = 0.0;
  double combat_eps = 0.0;
  double range_threshold = 0.0;
  double band_max_width = 0.0;
  bool legacy = false;
  bool no_cells = false;
};

int run_validate(const std::string& input) {
  const MatchLog log = parse_match_log(read_file(input));
  std::size_t samples = 0;
  for (const UnitTrack& u : log.units) samples += u.samples.size();
  std::cout << "ok: " << log.teams.size() << " teams, " << log.units.size() << " units, " << samples << " samples, "
            << log.combat_events.size() << " events\n";
  return 0;
}

int run_render(const RenderOptions& opt, PipelineConfig cfg) {
  cfg.time_window = parse_window(opt.time_window);
  if (opt.cell_radius > 0.0) cfg.cell_radius = opt.cell_radius;
  if (opt.combat_eps > 0.0) cfg.combat_eps = opt.combat_eps;
  if (opt.range_threshold > 0.0) cfg.range_threshold = opt.range_threshold;
  if (opt.band_max_width > 0.0) cfg.band_max_width = opt.band_max_width;
  cfg.mode = opt.legacy ? RenderMode::legacy : RenderMode::flow;
  cfg.style.draw_cells = !opt.no_cells;

  const MatchLog log = parse_match_log(read_file(opt.input));

  std::optional<PresetFlowGraphs> preset;
  if (!opt.flowgraphs.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(opt.flowgraphs));
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("$", std::string("invalid JSON in ") + opt.flowgraphs + ": " + e.what());
    }
    auto loaded = flowgraphs_from_json(doc);
    preset = PresetFlowGraphs{std::move(loaded.graphs), std::move(loaded.positions)};
  }

  const PipelineResult r = run_pipeline(log, cfg, preset ? &*preset : nullptr);
  if (r.clamp.clamped_samples > 0)
    warn("clamped " + std::to_string(r.clamp.clamped_samples) + " sample positions to the map bounds");
  if (r.clamp.clamped_event_positions > 0)
    warn("clamped " + std::to_string(r.clamp.clamped_event_positions) + " combat positions to the map bounds");

  write_file(opt.output, r.svg);

  const fs::path dump_dir = !opt.dump_dir.empty() ? fs::path(opt.dump_dir) : fs::path(opt.output).parent_path();
  for (const std::string& stage : opt.dumps) {
    nlohmann::json doc;
    if (stage == "territory") {
      doc = territory_json(*r.territory);
    } else if (stage == "semantics") {
      doc = semantics_json(r.semantic, r.representatives);
    } else if (stage == "flowgraphs") {
      doc = flowgraphs_json(r.graphs, r.positions);
    } else if (stage == "layout") {
      doc = layout_json(r.layouts);
    } else {
      doc = combat_json(r.sites, r.attacks);
    }
    write_file(dump_dir / (stage + ".json"), doc.dump(1) + "\n");
  }

  std::cout << "landmarks: " << r.territory->size() << '\n'
            << "representatives: " << r.representatives.size() << '\n'
            << "graphs: " << r.graphs.size() << '\n'
            << "sites: " << r.sites.size() << '\n'
            << "long-range attacks: " << r.attacks.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render battle maps with merged troop-flow graphs from match telemetry"};
  app.require_subcommand(1);

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Check a telemetry file against the schema");
  validate->add_option("input", validate_input, "Match telemetry JSON")->required();

  RenderOptions opt;
  PipelineConfig cfg;
  auto* render = app.add_subcommand("render", "Run the full pipeline and write an SVG battle map");
  render->add_option("input", opt.input, "Match telemetry JSON")->required();
  render->add_option("-o,--out", opt.output, "Output SVG path")->required();
  render->add_option("--cell-radius", opt.cell_radius, "Cell clustering radius (default 5% of map diagonal)");
  render->add_option("--turn-angle", cfg.turn_angle, "Heading change (degrees) marking a turn")->capture_default_str();
  render->add_option("--stop-speed", cfg.stop_speed, "Speed below which a unit is stopped")->capture_default_str();
  render->add_option("--stop-duration", cfg.stop_min_duration, "Minimum stop duration (s)")->capture_default_str();
  render->add_option("--idle-gap", cfg.idle_gap, "Dwell time (s) that splits episodes")->capture_default_str();
  render->add_option("--tau", cfg.tau, "Route similarity threshold in [0, 1]")->capture_default_str();
  render->add_option("--time-window", opt.time_window, "Merge window in seconds, or 'inf'")->capture_default_str();
  render->add_option("--combat-eps", opt.combat_eps, "Combat clustering radius (default 4% of map diagonal)");
  render->add_option("--min-pts", cfg.min_pts, "Minimum events per combat site")->capture_default_str();
  render->add_option("--range-threshold", opt.range_threshold,
                     "Long-range attack distance (default 25% of map diagonal)");
  render->add_option("--band-max-width", opt.band_max_width, "Band width at max troop size (default 2.5% of diagonal)");
  render->add_option("--width", cfg.style.canvas_width, "Canvas width")->capture_default_str();
  render->add_option("--height", cfg.style.canvas_height, "Canvas height (0 = from aspect ratio)")->capture_default_str();
  render->add_flag("--legacy-arrows", opt.legacy, "One arrow per representative trajectory (no flow graphs)");
  render->add_flag("--no-cells", opt.no_cells, "Do not draw territory cells");
  render->add_option("--dump", opt.dumps, "Write an intermediate artifact (repeatable)")
      ->check(CLI::IsMember({"territory", "semantics", "flowgraphs", "layout", "combat"}));
  render->add_option("--dump-dir", opt.dump_dir, "Directory for dumps (default: next to the SVG)");
  render->add_option("--flowgraphs", opt.flowgraphs, "Lay out flow graphs from a flowgraphs dump instead of computing them");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(validate_input);
    return run_render(opt, cfg);
  } catch (const IoError& e) {
    error(e.what());
    return kExitIo;
  } catch (const Error& e) {
    error(e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    error(e.what());
    return kExitData;
  }
}
