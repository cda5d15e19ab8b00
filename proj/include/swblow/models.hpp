#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "swblow/spectral.hpp"

namespace swblow {

enum class ModelVariant { NSW, SGN, ABCD };

std::string_view to_string(ModelVariant v);
ModelVariant parse_model_variant(std::string_view name);

struct ModelParams {
  ModelVariant variant = ModelVariant::NSW;
  // abcd dispersion coefficients; ignored by NSW and SGN.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double epsilon = 1.0;  // amplitude parameter
  double mu = 1.0;       // shallowness parameter

  // SGN elliptic solve
  double h_min = 1e-6;
  double solver_tol = 1e-12;
  int solver_max_iters = 5000;

  // Throws ConfigError naming the violated precondition.
  void validate() const;

  // Non-fatal remarks, e.g. a or c positive for the abcd system.
  std::vector<std::string> warnings() const;
};

// h is the total depth 1 + epsilon*eta, u the layer-averaged velocity.
struct ModelState {
  SpectralField h;
  SpectralField u;
  double t = 0.0;

  int grid_size() const { return h.grid_size(); }
};

struct Tendency {
  SpectralField dh;
  SpectralField du;
};

// Nonlinear shallow water: h_t = -eps (hu)_x, u_t = -eps u u_x - eta_x.
Tendency rhs_nsw(const ModelState& s, const ModelParams& p);

// Serre-Green-Naghdi. The velocity tendency comes from the elliptic solve
// below; the depth tendency matches NSW.
Tendency rhs_sgn(const ModelState& s, const ModelParams& p);

// abcd-Boussinesq, mode by mode:
//   h_t(n) = eps [i a mu n^3 u(n) - i n (hu)(n)] / (1 + b mu n^2)
//   u_t(n) = [i c mu n^3 h(n) - i n eta(n) - eps (i n / 2) (u^2)(n)] / (1 + d mu n^2)
Tendency rhs_abcd(const ModelState& s, const ModelParams& p);

// Dispatches on p.variant.
Tendency evaluate_rhs(const ModelState& s, const ModelParams& p);

// Solves w - (mu/3h) (h^3 w_x)_x = f through the symmetric weighted form
//   h w - (mu/3) (h^3 w_x)_x = h f
// with preconditioned conjugate gradients. Throws DegenerateDepth when
// min h < p.h_min and NoConvergence past p.solver_max_iters.
SpectralField invert_sgn_operator(const SpectralField& h, const SpectralField& f,
                                  const ModelParams& p);

// w - (mu/3h) (h^3 w_x)_x evaluated pointwise on the padded grid.
SpectralField apply_sgn_operator(const SpectralField& h, const SpectralField& w,
                                 const ModelParams& p);

// 1/2 int -c u_x^2 - a eta_x^2 + eta^2 + (1 + eta) u^2 dx
double hamiltonian(const ModelState& s, const ModelParams& p);

// Minimum of h over the 2N padded grid.
double min_depth(const SpectralField& h);

}  // namespace swblow
