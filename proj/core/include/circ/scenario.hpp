#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "circ/dynamics.hpp"
#include "circ/geometry.hpp"

namespace circ {

/// Parsed scenario config: [body], [dynamics] and [outputs] sections of a
/// flat key=value file. Unknown keys are rejected by name; parse errors
/// carry line numbers.
struct ScenarioFile {
  // [body]
  ShapeSpec shape = CircleSpec{1.0};
  int panels = 256;
  double rho = 1.0;

  // [dynamics]
  double gamma = 0.0;
  double dt = 1e-3;
  long steps = 0;
  IntegratorKind integrator = IntegratorKind::ImplicitMidpoint;
  PhaseSpaceKind space = PhaseSpaceKind::Se2Magnetic;
  Se2Momentum pi0;
  Se2Element pose0;
  bool has_p0 = false;
  double p0 = 0.0;  // defaults to gamma when absent

  // [outputs]
  std::string trajectory = "trajectory.txt";
  std::string summary = "summary.txt";
  std::string field = "field.txt";
  std::string leaves = "leaves.txt";
  double grid_min_x = -3.0, grid_max_x = 3.0;
  double grid_min_y = -3.0, grid_max_y = 3.0;
  int grid_n = 16;
  std::vector<long> field_steps = {0};
  double leaf_min = -1.0, leaf_max = 1.0;
  int leaf_count = 5;

  double extension_level() const { return has_p0 ? p0 : gamma; }
  SimConfig sim_config(const MassModel& mass) const;
};

ScenarioFile parse_scenario(std::istream& in);
ScenarioFile parse_scenario_file(const std::string& path);

/// Canonical serialization; parse(write(s)) == s key by key.
void write_scenario(const ScenarioFile& s, std::ostream& out);

}  // namespace circ
