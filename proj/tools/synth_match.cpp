// Writes a synthetic match log in the telemetry schema.
//
//   synth_match --seed 7 -o match.json

#include <cstdint>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "battleflow/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic match telemetry file"};
  std::uint64_t seed = 1;
  std::string out;
  battleflow::SyntheticParams params;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("-o,--out", out)->required();
  app.add_option("--units-per-team", params.units_per_team)->capture_default_str();
  app.add_option("--max-samples", params.max_samples)->capture_default_str();
  app.add_option("--events", params.events)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  file << battleflow::serialize_match_log(battleflow::synthesize_match(seed, params)) << '\n';
  if (!file) {
    std::cerr << "error: cannot write " << out << '\n';
    return 2;
  }
  return 0;
}
