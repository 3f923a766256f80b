// Command-line front end: scenario runner and verification harness.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numeric
// failure. The verify subcommand additionally exits nonzero when any
// verified-mode check fails.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "circ/errors.hpp"
#include "circ/runs.hpp"
#include "circ/scenario.hpp"

namespace {

circ::ScenarioFile load_config(const std::string& path) {
  if (path.empty()) throw circ::ValidationError("--config is required");
  return circ::parse_scenario_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar rigid body with circulation: simulation and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 20240901;
  std::string mode = "verified";

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", config_path, "scenario config file")->required();
    }
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "seed for randomized property checks");
    cmd->add_option("--mode", mode, "normalization mode")
        ->check(CLI::IsMember({"paper", "verified"}));
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a scenario");
  add_common(simulate, true);
  CLI::App* leaves = app.add_subcommand("leaves", "emit symplectic-leaf slices");
  add_common(leaves, true);
  CLI::App* verify = app.add_subcommand("verify", "run the property/discrepancy suite");
  add_common(verify, false);
  bool inject_defect = false;
  verify->add_flag("--inject-defect", inject_defect,
                   "corrupt one structure matrix (test fixture)");
  CLI::App* field = app.add_subcommand("field", "emit velocity-field snapshots");
  add_common(field, true);
  CLI::App* added_mass_cmd = app.add_subcommand("added-mass", "print mass matrices");
  add_common(added_mass_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      circ::run_simulate(load_config(config_path), out_dir);
    } else if (leaves->parsed()) {
      circ::run_leaves(load_config(config_path), out_dir);
    } else if (field->parsed()) {
      circ::run_field(load_config(config_path), out_dir);
    } else if (added_mass_cmd->parsed()) {
      circ::run_added_mass(load_config(config_path), std::cout);
    } else if (verify->parsed()) {
      circ::VerifyOptions opt;
      opt.seed = seed;
      opt.mode = mode == "paper" ? circ::NormalizationMode::Paper
                                 : circ::NormalizationMode::Verified;
      opt.inject_defect = inject_defect;
      return circ::run_verify(opt, std::cout);
    }
  } catch (const circ::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const circ::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
