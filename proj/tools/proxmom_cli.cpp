#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "proxmom/config.hpp"
#include "proxmom/errors.hpp"
#include "proxmom/runner.hpp"

namespace {

proxmom::ExperimentConfig load_config(const std::string& path, const std::string& out_dir,
                                      const std::vector<std::uint64_t>& seed_override) {
  proxmom::ExperimentConfig cfg = proxmom::parse_config(path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (!seed_override.empty()) cfg.seeds = seed_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic proximal-gradient solvers with momentum"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::uint64_t> seed_override;
  bool full = false;

  CLI::App* run = app.add_subcommand("run", "run each solver x seed, write trace CSVs and a summary");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory, overrides the config");
  run->add_option("--seed-override", seed_override, "replace the config seed list");

  CLI::App* compare =
      app.add_subcommand("compare", "run all solvers and align mean/min/max objective by passes");
  compare->add_option("config", config_path, "experiment config file")->required();
  compare->add_option("--out", out_dir, "output directory, overrides the config");
  compare->add_option("--seed-override", seed_override, "replace the config seed list");

  CLI::App* check = app.add_subcommand("check", "run the library self-check suite");
  check->add_flag("--full", full, "include rate-fit and statistical checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return proxmom::cmd_run(load_config(config_path, out_dir, seed_override), std::cout);
    if (compare->parsed())
      return proxmom::cmd_compare(load_config(config_path, out_dir, seed_override), std::cout);
    return proxmom::cmd_check(full, std::cout);
  } catch (const proxmom::DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
