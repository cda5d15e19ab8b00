#pragma once

// Initial-data constructors and multi-stage experiments around the dry-spot,
// sign-change and singular-functional blow-up mechanisms.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swblow/diagnostics.hpp"
#include "swblow/models.hpp"
#include "swblow/reduction.hpp"
#include "swblow/timestepping.hpp"

namespace swblow {

struct HypothesisCheck {
  std::string name;
  std::string description;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ScenarioReport {
  std::string id;
  std::vector<HypothesisCheck> hypotheses;
  std::vector<std::pair<std::string, double>> outcomes;  // insertion order is kept
  std::vector<std::string> notes;
  std::vector<std::string> files;

  bool all_hypotheses_passed() const;
  std::optional<double> outcome(std::string_view key) const;
  void set_outcome(std::string key, double value);
  // key = value lines grouped under [hypotheses], [outcomes], [notes], [files].
  std::string to_text() const;
};

// Points on which constructors validate their data.
inline constexpr int kValidationPoints = 2048;

struct DrySpotData {
  ModelState state;
  PointJet jet;
  ScenarioReport checks;
};

// h0 = 1 - cos x, u0 = -steepness sin x. Requires steepness > 0, n >= 32.
DrySpotData make_dry_spot_data(double steepness, int n);

// Integrates the jet ODE from the dry-spot data; the PDE itself is not
// integrable at a dry point.
struct DrySpotOptions {
  JetSystem system = JetSystem::Full;
  double t_end = 2.0;
  double dt = 1e-3;
};
ScenarioReport run_dry_spot_reduction(double steepness, int n, const DrySpotOptions& opt = {});

struct SignChangeData {
  ModelState state;
  double c1 = 0.0;
  double c2 = 0.0;
  double gamma = 0.0;
  ScenarioReport checks;
};

// h0 = c1 (1 - cos x) + c2 (1 - cos 2x)^2, u0 = sin x (sin^2(x/2) - gamma)
// with gamma = -2, so u0'''(0) = -1/2. Requires a < 0, sigma > 0, n >= 16.
// Throws ConstructionFailed if the grid validation fails.
SignChangeData make_sign_change_data(double sigma, double a, int n);

struct Theorem2Options {
  double sigma = 0.1;  // margin used by the constructor
  double dt = 1e-3;
  int max_halvings = 8;
  double fd_step = 1e-3;  // fourth-order central difference of h(t, 0)
  bool symmetry_projection = false;
};

struct Theorem2Result {
  ScenarioReport report;
  double delta = 0.0;  // after halving
  ModelState backward_state;
  Trajectory forward;
  std::optional<double> sign_change_time;  // relative to the relabelled start
  double slope_measured = 0.0;             // d alpha0/dt at the relabelled start
  double slope_predicted = 0.0;            // -a beta3 - alpha0 beta1
  double linear_prediction = 0.0;          // -alpha0 / slope_predicted
};

// Backward to -delta, margin checks, relabel, forward 2 delta. Requires the
// abcd variant with b = c = 0 and d >= 0. Throws DeltaTooLarge when the
// margins still fail after max_halvings halvings.
Theorem2Result run_theorem2_construction(const ModelState& s0, const ModelParams& p, double delta,
                                         const Theorem2Options& opt = {});

// h0 = -1 - beta cos x, u0 = -gamma (sin x - sin(2x)/4).
ModelState make_theorem3_data(double beta, double gamma, int n);

struct InequalitySlice {
  double t = 0.0;
  MonitorGeometry geometry;
  FunctionalSample functionals;  // meaningful when geometry.found
  bool hypotheses_ok = false;
  std::optional<RateBounds> bounds;
  double rate_h_rhs = 0.0;  // functionals applied to the model tendency
  double rate_u_rhs = 0.0;
  std::optional<double> rate_h_fd;  // finite differences along the records
  std::optional<double> rate_u_fd;
  int fd_points = 0;
  bool verified = false;  // rates >= bounds - slack; only set when hypotheses_ok
};

// Evaluates the functionals and both growth inequalities on each state. The
// geometry (omega, sigma) comes from the monitor scan of each slice and is
// held fixed across that slice's finite-difference stencil.
std::vector<InequalitySlice> check_functional_inequalities(std::span<const ModelState> states,
                                                           const ModelParams& p, double lambda,
                                                           double slack, int cells = 32768);

struct Theorem3Options {
  double dt = 2.5e-4;
  int record_every = 4;
  double lambda = 0.25;
  double slack = 1e-6;
  int cells = 32768;
  bool symmetry_projection = false;
};

struct Theorem3Result {
  ScenarioReport report;
  Trajectory trajectory;
  std::vector<InequalitySlice> slices;
  std::optional<double> first_violation_time;
  std::optional<double> riccati_time;  // from the first slice where all hypotheses hold
};

// Requires the abcd variant with b = d = 0 and a, c <= 0.
Theorem3Result run_theorem3_monitor(const ModelState& s0, const ModelParams& p, double horizon,
                                    const Theorem3Options& opt = {});

}  // namespace swblow
