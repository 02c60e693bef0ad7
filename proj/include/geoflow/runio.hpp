#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "geoflow/scenario.hpp"

namespace geoflow {

/// A completed scenario execution: records, sampled point snapshots, the
/// invariant-violation list and the process exit code (0 converged, 2 blowup,
/// 3 timeout, 4 invariant violation).
struct RunOutput {
  FlowStatus status = FlowStatus::Running;
  std::vector<DiagnosticRecord> records;
  std::vector<std::pair<double, std::vector<Point>>> snapshots;
  std::vector<std::string> violations;
  int exit_code = 0;
  double final_length = 0.0;
  double final_kappa_sup = 0.0;
  long steps = 0;
};

RunOutput execute_scenario(const Scenario& scn);

/// Executes and writes diagnostics.csv, snapshots.jsonl and summary.json into
/// out_dir. Returns the exit code.
int run_scenario(const Scenario& scn, const std::filesystem::path& out_dir);

std::string status_name(FlowStatus status);

/// The diagnostics CSV text (fixed column order, %.17g fields, empty cells
/// for absent optionals).
std::string diagnostics_csv(const std::vector<DiagnosticRecord>& records);

}  // namespace geoflow
