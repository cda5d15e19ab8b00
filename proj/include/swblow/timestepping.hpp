#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swblow/diagnostics.hpp"
#include "swblow/models.hpp"

namespace swblow {

struct IntegratorConfig {
  double dt = 1e-3;  // base step, always positive; direction comes from t_end
  double t_end = 1.0;
  int record_every = 1;
  double blowup_norm_threshold = 1e6;
  double dt_min = 1e-10;
  bool symmetry_projection = false;
  double rel_tol = 1e-8;  // step-doubling error target
  bool analyticity_detector = true;
  double analyticity_floor = 1e-13;
  std::size_t max_steps = 50'000'000;

  // Throws ConfigError.
  void validate() const;
};

enum class Termination { Completed, BlowupDetected, SolverError };
enum class BlowupKind { None, NormThreshold, AnalyticityCollapse, DtUnderflow };

std::string_view to_string(Termination t);
std::string_view to_string(BlowupKind k);

struct TerminationInfo {
  Termination status = Termination::Completed;
  BlowupKind blowup = BlowupKind::None;
  std::string reason;
  double t = 0.0;  // time of the last accepted state
};

struct Trajectory {
  // Snapshots at t0 + m * record_every * dt, plus the final state if a run
  // stops between records.
  std::vector<ModelState> states;
  TerminationInfo termination;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

struct IntegrationResult {
  Trajectory trajectory;
  std::vector<DiagnosticsSample> diagnostics;  // one per recorded state
};

// Classical four-stage Runge-Kutta step; dt may be negative.
ModelState step_rk4(const ModelState& s, double dt, const ModelParams& p);

Trajectory integrate(const ModelState& s0, const ModelParams& p, const IntegratorConfig& cfg);

IntegrationResult integrate(const ModelState& s0, const ModelParams& p, const IntegratorConfig& cfg,
                            const DiagnosticsConfig& diag);

}  // namespace swblow
