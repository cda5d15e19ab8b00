#pragma once

// Pointwise jet reduction at the symmetry point x = 0.
//
// For even h and odd u the derivatives alpha_i = d^i h/dx^i (0) and
// beta_i = d^i u/dx^i (0) close, at a dry point, into
//   alpha2' = -3 beta1 alpha2,   beta1' = -beta1^2 - alpha2     (Full)
//   alpha2' = -3 beta1 alpha2,   beta1' = -alpha2               (Simplified)

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "swblow/models.hpp"

namespace swblow {

struct PointJet {
  std::array<double, 4> alpha{};  // h, h_x, h_xx, h_xxx at x = 0
  std::array<double, 4> beta{};   // u, u_x, u_xx, u_xxx at x = 0
};

enum class JetSystem { Full, Simplified };

std::string_view to_string(JetSystem s);
JetSystem parse_jet_system(std::string_view name);

struct JetState {
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double t = 0.0;
  JetSystem system = JetSystem::Full;
};

struct JetRate {
  double dalpha2 = 0.0;
  double dbeta1 = 0.0;
};

JetRate jet_rhs(const JetState& j);

struct JetIntegrationOptions {
  double rel_tol = 1e-13;           // per-step relative error (step doubling)
  double blowup_threshold = 1e12;   // |beta1| beyond which the run stops
  std::size_t max_steps = 5'000'000;
};

struct JetRun {
  std::vector<JetState> series;
  bool blew_up = false;
  // Pole location from a fit of beta1 ~ C/(t* - t) over the last decade of
  // |beta1| growth; empty when no blow-up was reached before t_end.
  std::optional<double> blowup_time;
};

// Adaptive RK4 march from j0 to t_end with initial step dt > 0.
JetRun integrate_jet(const JetState& j0, double dt, double t_end,
                     const JetIntegrationOptions& options = {});

// Pole of the comparison solution beta1(0)/(1 + t beta1(0)): -1/beta1(0) for
// beta1(0) < 0, +infinity otherwise.
double riccati_upper_time(double beta1_0);

// alpha2 - (3/2) beta1^2, conserved by the Simplified flow.
double simplified_invariant(const JetState& j);

PointJet jet_from_state(const ModelState& s);

// d alpha0/dt = -a beta3 - alpha0 beta1 for the b = 0 abcd system with even h
// and odd u.
double acd_alpha0_rate(const PointJet& j, double a);

}  // namespace swblow
