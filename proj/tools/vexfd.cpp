// vexfd: runs blow-up and structural experiments from config files.
//
//   vexfd run configs/homogenize_p2.ini
//   vexfd homogenize-1d configs/homogenize_p2.ini --grid-nodes 32 --out /tmp/h
//   vexfd validate                      (built-in defaults)
//
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 config error (no
// artifacts written), 3 solver non-convergence (partial artifacts written).

#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "vexfd/experiments.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> gridNodes;
  std::optional<double> tolerance;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--grid-nodes", o.gridNodes, "cells per axis for grids and cell problems");
  app->add_option("--tolerance", o.tolerance, "verdict tolerance");
}

// Overrides are applied to the echo and re-parsed so they get the same checks.
vexfd::ExperimentConfig resolve(const std::string& path, const std::string& kind, const Overrides& o) {
  vexfd::ExperimentConfig c;
  if (path.empty()) {
    c.experiment = kind;
  } else {
    c = vexfd::load_config(path);
    if (!kind.empty() && c.experiment != kind)
      throw vexfd::ConfigError(path + ": [experiment] is '" + c.experiment + "', subcommand is '" + kind + "'");
  }
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.gridNodes) {
    c.nodes = *o.gridNodes;
    c.cells = *o.gridNodes;
  }
  if (o.tolerance) c.tolerance = *o.tolerance;
  return vexfd::parse_config(vexfd::echo_config(c), path.empty() ? "<defaults>" : path + " (with overrides)");
}

int execute(const vexfd::ExperimentConfig& c) {
  try {
    const auto report = vexfd::run_experiment(c);
    vexfd::write_artifacts(report, c.out);
    std::cout << vexfd::report_text(report);
    return report.passed() ? 0 : 1;
  } catch (const vexfd::ExperimentAborted& e) {
    vexfd::write_artifacts(e.partial, c.out);
    std::cerr << "vexfd: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up density and structural experiments for variable-exponent free-discontinuity energies"};
  app.require_subcommand(1);

  std::string runPath;
  Overrides runOverrides;
  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("config", runPath, "config file")->required();
  add_overrides(run, runOverrides);

  struct Kind {
    std::string name;
    std::string path;
    Overrides overrides;
    CLI::App* cmd = nullptr;
  };
  std::vector<Kind> kinds;
  kinds.reserve(vexfd::experiment_kinds().size());
  for (const auto& k : vexfd::experiment_kinds()) {
    kinds.push_back({k, {}, {}, nullptr});
    auto& kind = kinds.back();
    kind.cmd = app.add_subcommand(k, "run a " + k + " experiment (config optional)");
    kind.cmd->add_option("config", kind.path, "config file");
    add_overrides(kind.cmd, kind.overrides);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return execute(resolve(runPath, "", runOverrides));
    for (const auto& k : kinds)
      if (k.cmd->parsed()) return execute(resolve(k.path, k.name, k.overrides));
  } catch (const vexfd::ConfigError& e) {
    std::cerr << "vexfd: config error: " << e.what() << "\n";
    return 2;
  } catch (const vexfd::NumericError& e) {
    std::cerr << "vexfd: numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const vexfd::Error& e) {
    std::cerr << "vexfd: invalid experiment: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
