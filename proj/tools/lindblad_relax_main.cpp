#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lindblad/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent Lindblad propagation, relaxation certification, "
               "and the driven-Ising Otto cycle"};
  std::string config_path;
  std::string out_dir;
  std::string scenario;
  std::uint64_t seed = 0;
  int samples = 0;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--scenario", scenario, "certify|evolve|otto|commutant (overrides config)");
  app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--samples", samples, "grid sample count (overrides config)");
  CLI11_PARSE(app, argc, argv);

  lindblad::RunConfig config;
  try {
    config = lindblad::load_run_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!scenario.empty()) config.scenario = lindblad::scenario_from_string(scenario);
    if (app.count("--seed") > 0) config.seed = seed;
    if (samples > 0) config.grid.samples = samples;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return lindblad::run(config);
}
