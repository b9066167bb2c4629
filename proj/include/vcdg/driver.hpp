#pragma once

#include <map>

#include "vcdg/config.hpp"
#include "vcdg/estimator.hpp"
#include "vcdg/io.hpp"

namespace vcdg {

struct RunOutput {
  ResolvedConfig cfg;
  Trajectory traj;
  std::vector<EstimatorRecord> records;
  double max_hR = 0.0;
  double max_eR = -1.0;
  bool ok = false;
  std::string error;
};

RunOutput run_experiment(const RunConfig& cfg);

// trajectory checkpoints, estimator report, energy history, manifest
void write_run_artifacts(const RunOutput& out, const std::string& dir,
                         bool write_states = true);

struct SweepResult {
  // per degree: one convergence row per mesh size, coarse to fine
  std::map<int, std::vector<ConvergenceRow>> tables;
  bool ok = true;
  std::string error;
};

SweepResult run_converge(const RunConfig& base, const std::vector<int>& Ns,
                         const std::vector<int>& ps, int jobs = 0);

void write_convergence_tables(const SweepResult& sweep, const std::string& dir,
                              const std::string& test, bool with_error_columns);

} // namespace vcdg
