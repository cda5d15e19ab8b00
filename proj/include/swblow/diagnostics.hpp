#pragma once

// Blow-up diagnostics evaluated on single states:
//   - exponential-decay fit of the Fourier spectrum (analyticity strip),
//   - analytic-norm energies on the shrinking strip nu(t) = 0.9 - k|t|,
//   - the singular weighted functionals F_h, F_u and the five sign
//     hypotheses under which they obey Riccati-type growth inequalities,
//   - the b > 0 sign-change criterion at x = 0.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "swblow/models.hpp"
#include "swblow/reduction.hpp"

namespace swblow {

// ---------------------------------------------------------------------------
// Analyticity strip

struct AnalyticityFit {
  double tau = 0.0;       // -slope of log|c(k)| against k, clamped at 0
  double log_amp = 0.0;   // intercept
  double residual = 0.0;  // RMS of the log-linear fit
  int k_lo = 0;
  int k_hi = 0;
  int usable_modes = 0;
  bool degenerate = true;  // fewer than kMinModes modes above the floor
};

inline constexpr int kAnalyticityMinModes = 8;

// Fits log|c(k)| ~ log_amp - tau*k over modes k >= 1 with |c(k)| > floor.
AnalyticityFit analyticity_fit(const SpectralField& f, double floor = 1e-13);

// ---------------------------------------------------------------------------
// Shrinking-strip energies

enum class EnergyCase {
  Case1,  // b, d > 0:        E = |h|_nu + |u|_nu
  Case2,  // b = c = 0, d > 0: E = |h|_nu + |u_xx|_nu
};

std::string_view to_string(EnergyCase c);

// The case that applies to p, if any.
std::optional<EnergyCase> energy_case_for(const ModelParams& p);

// Strip shrink rate k:
//   Case1: max(|a|/b, |c|/d) + 1
//   Case2: max(|a|, 2/d + 4 E(0)) + 1
// Throws DomainError when neither case applies.
double shrink_rate(const ModelParams& p, double frak_E0);

inline constexpr double kStripStart = 0.9;
inline constexpr double kStripFloor = 0.25;

struct EnergySample {
  double t = 0.0;
  double nu = 0.0;
  double k_rate = 0.0;
  double energy = 0.0;
  EnergyCase energy_case = EnergyCase::Case1;
};

// Throws StripExhausted once nu(t) <= 0.25.
EnergySample energy_sample(const ModelState& s, double k_rate, EnergyCase energy_case);

// ---------------------------------------------------------------------------
// Singular functionals

using HypothesisFlags = std::array<bool, 5>;

inline constexpr int kHypothesisCheckPoints = 512;
inline constexpr double kHypothesisTolerance = 1e-12;

struct FunctionalSample {
  double F_h = 0.0;  // -int_0^omega h / x^lambda
  double F_u = 0.0;  // -int_0^omega u / x^lambda
  double lambda = 0.25;
  double omega = 0.0;
  double sigma = 0.0;
  // 1: h < -sigma, 2: u <= 0, 3: h_x >= 0, 4: c h_xxx >= 0, 5: a u_xx >= 0,
  // each on [0, omega].
  HypothesisFlags hypotheses_ok{};

  bool all_hypotheses_ok() const;
};

// Evaluates the five hypotheses on the uniform check grid over [0, omega].
HypothesisFlags check_hypotheses(const ModelState& s, const ModelParams& p, double omega,
                                 double sigma, int points = kHypothesisCheckPoints);

FunctionalSample singular_functionals(const ModelState& s, const ModelParams& p, double lambda,
                                      double omega, double sigma,
                                      int cells = 32768);

struct RateBounds {
  double h_rate_lb = 0.0;  // (lambda sigma / omega) F_u
  double u_rate_lb = 0.0;  // lambda / (2 omega^(2 - lambda)) F_u^2
};

// Throws HypothesesViolated unless all five flags hold.
RateBounds functional_rate_bounds(const FunctionalSample& fs);

// Pole time 2 omega^(2-lambda) / (lambda F_u0) of z' = lambda/(2 omega^(2-lambda)) z^2.
double riccati_lower_blowup_time(double F_u0, double lambda, double omega);

// Largest interval [0, omega] on which all five hypotheses hold at the scan
// points, with sigma = -max h on it.
struct MonitorGeometry {
  bool found = false;
  double omega = 0.0;
  double sigma = 0.0;
};

MonitorGeometry monitor_geometry(const ModelState& s, const ModelParams& p,
                                 int scan_points = kHypothesisCheckPoints);

// ---------------------------------------------------------------------------
// Sign-change criterion for b > 0 (epsilon = mu = 1).
//
// With h0(0) = 0 the depth at the origin starts to decrease iff
//   h_t(0) = -[(1 - b d_xx)^-1 d_x (a u0_xx + h0 u0)](0) < 0.
// Splitting a u_xx = (a/b) u - (a/b)(1 - b d_xx) u gives the real-space form
//   (a/b) u0_x(0) - sum_n int_{-pi}^{pi} G(y + 2 pi n) [ (h0 u0)_x + (a/b) u0_x ](y) dy
// with the free-space Green's function G(y) = exp(-|y|/sqrt(b)) / (2 sqrt(b)).

// Fourier-space evaluation of h_t(0).
double sign_change_criterion_b(const SpectralField& h0, const SpectralField& u0, double a, double b);

// Real-space lattice-sum evaluation of the same quantity; images are summed
// until exp(-2 pi n / sqrt(b)) < 1e-15.
double sign_change_criterion_kernel(const SpectralField& h0, const SpectralField& u0, double a,
                                    double b);

// ---------------------------------------------------------------------------
// Per-slice record used by the integrator

struct DiagnosticsConfig {
  bool jets = true;
  bool energies = true;
  bool analyticity = true;
  bool functionals = false;
  bool hamiltonian = true;
  double lambda = 0.25;
  // Fixed functional geometry; when unset the monitor derives it per slice.
  std::optional<double> omega;
  std::optional<double> sigma;
  double analyticity_floor = 1e-13;
  int quadrature_cells = 32768;
};

struct DiagnosticsSample {
  double t = 0.0;
  double mean_h = 0.0;
  double mean_u = 0.0;
  std::optional<PointJet> jet;
  std::optional<EnergySample> energy;
  std::optional<AnalyticityFit> fit_h;
  std::optional<AnalyticityFit> fit_u;
  std::optional<double> hamiltonian;
  std::optional<FunctionalSample> functionals;
  std::optional<RateBounds> bounds;
};

// Strip data fixed at the start of a run.
struct EnergyContext {
  EnergyCase energy_case = EnergyCase::Case1;
  double k_rate = 0.0;
};

// Picks the case and shrink rate for p from the initial state, if a case applies.
std::optional<EnergyContext> energy_context(const ModelState& s0, const ModelParams& p);

DiagnosticsSample sample_diagnostics(const ModelState& s, const ModelParams& p,
                                     const DiagnosticsConfig& cfg,
                                     const std::optional<EnergyContext>& energy);

}  // namespace swblow
