#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fwr/errors.hpp"
#include "fwr/harness.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_numerical = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waveform relaxation experiments for time-fractional diffusion", "fwr"};
  std::string config_path, preset_name, out_dir;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  bool seed = false, list = false;

  auto* config_opt = app.add_option("--config", config_path, "JSON experiment file");
  app.add_option("--preset", preset_name, "built-in experiment")->excludes(config_opt);
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--tol", tol, "stopping tolerance override");
  app.add_option("--max-iter", max_iter, "iteration cap override");
  app.add_flag("--seed-check", seed, "run the built-in oracle and property checks");
  app.add_flag("--list-presets", list, "print preset names");

  if (argc == 1) {
    std::cout << app.help();
    return exit_ok;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_config;
  }

  if (list) {
    for (const auto& n : fwr::preset_names()) std::cout << n << "\n";
    return exit_ok;
  }
  if (seed) return fwr::seed_check(std::cout) == 0 ? exit_ok : exit_numerical;

  std::vector<fwr::ExperimentConfig> configs;
  try {
    if (!config_path.empty()) configs.push_back(fwr::parse_config(config_path));
    else if (!preset_name.empty()) configs = fwr::preset(preset_name);
    else {
      std::cerr << "need --config, --preset, --seed-check or --list-presets\n" << app.help();
      return exit_config;
    }
  } catch (const fwr::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  for (auto& c : configs) {
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (tol) c.tolerance = *tol;
    if (max_iter) c.max_iter = *max_iter;
  }

  try {
    for (const auto& c : configs)
      for (const auto& p : fwr::run_experiment(c)) std::cout << p.string() << "\n";
  } catch (const fwr::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
