// Command-line front end: `specstab run` executes one configured run into an
// output directory, `specstab report` joins the results of several runs.
// Exit codes: 0 ok, 2 config/usage problem, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specstab/errors.hpp"
#include "specstab/io/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet eigenvalue stability laboratory"};
  app.set_version_flag("--version", specstab::io::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  bool resolution_check = false;
  auto* run_cmd = app.add_subcommand("run", "Execute the command described by a config file");
  run_cmd->add_option("--config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the config's 'out')");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Seed override");
  run_cmd->add_flag("--resolution-check", resolution_check,
                    "Force the dual-resolution (h, h/2) re-measurement");

  std::vector<std::string> dirs;
  std::string report_out = "report.csv";
  bool allow_mixed = false;
  auto* report_cmd = app.add_subcommand("report", "Join the results.csv of several runs");
  report_cmd->add_option("dirs", dirs, "Run directories")
      ->required()
      ->check(CLI::ExistingDirectory);
  report_cmd->add_option("--out", report_out, "Merged CSV path (default report.csv)");
  report_cmd->add_flag("--allow-mixed-grids", allow_mixed,
                       "Join runs on different grids, adding an h column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      auto cfg = specstab::io::load_run_config(config_path);
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed;
      specstab::io::apply_overrides(cfg, seed_override, resolution_check);
      const std::string target = out_dir.empty() ? cfg.out : out_dir;
      if (target.empty())
        throw specstab::ConfigError("no output directory: pass --out or set 'out'");
      specstab::io::run(cfg, target);
      std::cout << "wrote " << target << "/results.csv\n";
    } else {
      std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
      specstab::io::report(paths, report_out, allow_mixed);
      std::cout << "wrote " << report_out << "\n";
    }
  } catch (const specstab::ConfigError& e) {
    std::cerr << "specstab: " << e.what() << "\n";
    return 2;
  } catch (const specstab::Error& e) {
    std::cerr << "specstab: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "specstab: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
