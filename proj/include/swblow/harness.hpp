#pragma once

// Run orchestration behind the command-line tool: builds initial data from a
// RunConfig, runs the requested pipeline, renders CSV bodies and writes them
// with a manifest.

#include <map>
#include <string>
#include <vector>

#include "swblow/config.hpp"
#include "swblow/models.hpp"
#include "swblow/timestepping.hpp"

namespace swblow {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitCompleted = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBlowup = 10;
inline constexpr int kExitSolverError = 20;

int exit_code_for(Termination t);

// Initial state selected by cfg.initial on a cfg.n grid.
ModelState build_initial_state(const RunConfig& cfg);

// File name -> CSV body, in memory.
using CsvFiles = std::map<std::string, std::string>;

struct SimulationOutput {
  IntegrationResult result;
  CsvFiles files;  // state_series.csv, jets.csv, energies.csv, functionals.csv
};

// Validates, integrates and renders; writes nothing.
SimulationOutput simulate(const RunConfig& cfg);

struct SweepRow {
  std::size_t index = 0;
  RunConfig config;
  std::string status;       // completed, blowup, solver_error, config_error
  std::string blowup_kind;  // none, norm_threshold, ...
  double t_norm = 0.0;      // nan unless that detector fired
  double t_tau = 0.0;
  double t_dt = 0.0;
  double t_final = 0.0;
  double riccati_upper = 0.0;  // -1/beta1(0) where a dry-spot jet applies, else nan
  double jet_blowup = 0.0;     // fitted pole of the jet ODE (reduce mode), else nan
  std::string message;
};

// Cartesian product of the sweep axes, last axis varying fastest, in the
// order a, b, c, d, steepness, n, alpha2, beta1.
std::vector<RunConfig> sweep_grid(const RunConfig& cfg);

// Runs the grid on `workers` threads (0: hardware concurrency). Row order
// follows sweep_grid regardless of completion order.
std::vector<SweepRow> run_sweep_rows(const RunConfig& cfg, int workers);
std::string render_sweep_table(const std::vector<SweepRow>& rows);

struct RunOutcome {
  int exit_code = kExitCompleted;
  std::string status;
  std::string message;
  std::vector<std::string> files;  // paths written, manifest last
};

// Each entry point validates the config, writes into cfg.output_dir and never
// throws: errors are mapped onto exit codes and recorded in the manifest.
RunOutcome run_simulate(const RunConfig& cfg);
RunOutcome run_reduce(const RunConfig& cfg);
RunOutcome run_scenario(const RunConfig& cfg);
RunOutcome run_sweep(const RunConfig& cfg);

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace swblow
