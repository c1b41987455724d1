// thermocollide: run or validate an experiment config.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thermocollide/thermocollide.hpp"

namespace {

constexpr int kExitConfig = 2;

int do_validate(const std::string& path) {
  try {
    const auto cfg = thermocollide::load_config(path);
    std::cout << path << ": ok\n" << thermocollide::validation_report(cfg);
    return 0;
  } catch (const thermocollide::ConfigError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kExitConfig;
  }
}

int do_run(const std::string& path, const thermocollide::RunOptions& opts) {
  thermocollide::ExperimentConfig cfg;
  try {
    cfg = thermocollide::load_config(path);
  } catch (const thermocollide::ConfigError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kExitConfig;
  }
  const auto result = thermocollide::run_experiment(cfg, opts);
  std::size_t ok = 0;
  for (const auto& p : result.points) ok += p.ok ? 1 : 0;
  for (const auto& f : result.outputs) std::cout << "wrote " << f << '\n';
  std::cout << "wrote " << result.manifest << '\n'
            << ok << " of " << result.points.size() << " points succeeded\n";
  for (const auto& p : result.points)
    if (!p.ok) {
      std::cerr << "point";
      for (const auto& [k, v] : p.coordinates) std::cerr << ' ' << k << '=' << v;
      std::cerr << ": " << p.message << '\n';
    }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-model quantum heat engine experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", thermocollide::kVersion);

  unsigned jobs = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string run_path, validate_path;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV results plus a manifest");
  run->add_option("config", run_path, "Experiment config file")->required();
  run->add_option("--jobs", jobs, "Worker threads (default: logical processors)");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out, "Override the config output_dir");

  auto* validate = app.add_subcommand("validate", "Check a config and print derived quantities");
  validate->add_option("config", validate_path, "Experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage mistakes count as configuration errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*validate) return do_validate(validate_path);
    return do_run(run_path, thermocollide::RunOptions{jobs, seed, out});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
