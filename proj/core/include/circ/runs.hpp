#pragma once

#include <iosfwd>
#include <string>

#include "circ/poisson.hpp"
#include "circ/scenario.hpp"

namespace circ {

/// Full pipeline: body -> added mass -> integration; writes the trajectory
/// file and a run summary into out_dir.
void run_simulate(const ScenarioFile& s, const std::string& out_dir);

/// Phase-portrait slices: (Pi, Px) traces of the leaf paraboloids at Py = 0
/// for a grid of Casimir values (paper and verified coefficient), plus the
/// trajectory samples for overlay. Requires Gamma != 0.
void run_leaves(const ScenarioFile& s, const std::string& out_dir);

/// Velocity-field snapshots on the configured grid at the configured
/// trajectory steps; interior points carry a mask flag.
void run_field(const ScenarioFile& s, const std::string& out_dir);

/// Mass matrices (M_b, M_f, M) for the configured body, as readable 3x3
/// blocks plus a machine-readable key=value section.
void run_added_mass(const ScenarioFile& s, std::ostream& out);

struct VerifyOptions {
  std::uint64_t seed = 20240901;
  NormalizationMode mode = NormalizationMode::Verified;
  bool inject_defect = false;  // test fixture: corrupt one structure matrix
};

/// Property and discrepancy suite. Prints one line per check plus the
/// normalization report; returns 0 iff every verified-mode check passes
/// (paper-mode mismatches are reported, not failed).
int run_verify(const VerifyOptions& opt, std::ostream& report);

}  // namespace circ
