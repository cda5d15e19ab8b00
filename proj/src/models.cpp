#include "swblow/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "swblow/errors.hpp"
#include "sgn_operator.hpp"

namespace swblow {

std::string_view to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::NSW: return "nsw";
    case ModelVariant::SGN: return "sgn";
    case ModelVariant::ABCD: return "abcd";
  }
  return "unknown";
}

ModelVariant parse_model_variant(std::string_view name) {
  if (name == "nsw") return ModelVariant::NSW;
  if (name == "sgn") return ModelVariant::SGN;
  if (name == "abcd") return ModelVariant::ABCD;
  throw ConfigError("unknown model variant '" + std::string(name) + "' (expected nsw, sgn or abcd)");
}

void ModelParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("model.epsilon must be positive");
  if (!(mu > 0.0)) throw ConfigError("model.mu must be positive");
  if (!(h_min > 0.0)) throw ConfigError("model.h_min must be positive");
  if (!(solver_tol > 0.0)) throw ConfigError("model.solver_tol must be positive");
  if (solver_max_iters < 1) throw ConfigError("model.solver_max_iters must be at least 1");
  if (variant == ModelVariant::ABCD) {
    if (!(b >= 0.0)) throw ConfigError("abcd system requires b >= 0 (got b = " + std::to_string(b) + ")");
    if (!(d >= 0.0)) throw ConfigError("abcd system requires d >= 0 (got d = " + std::to_string(d) + ")");
    if (!std::isfinite(a) || !std::isfinite(c)) throw ConfigError("abcd coefficients must be finite");
  }
}

std::vector<std::string> ModelParams::warnings() const {
  std::vector<std::string> out;
  if (variant == ModelVariant::ABCD) {
    if (a > 0.0) out.push_back("abcd coefficient a > 0; the usual water-wave regime has a <= 0");
    if (c > 0.0) out.push_back("abcd coefficient c > 0; the usual water-wave regime has c <= 0");
  }
  return out;
}

double min_depth(const SpectralField& h) {
  const auto samples = to_grid(h, 2 * h.grid_size());
  return *std::min_element(samples.begin(), samples.end());
}

namespace {

void check_state(const ModelState& s) {
  if (s.h.empty() || s.u.empty()) throw ConfigError("model state has empty fields");
  if (s.h.grid_size() != s.u.grid_size()) throw ConfigError("h and u live on different grids");
}

SpectralField eta_of(const SpectralField& h, const ModelParams& p) {
  return h.plus_constant(-1.0) * (1.0 / p.epsilon);
}

// -eps (hu)_x, shared by NSW and SGN
SpectralField mass_flux_tendency(const ModelState& s, const ModelParams& p) {
  return derivative(multiply(s.h, s.u), 1) * (-p.epsilon);
}

}  // namespace

Tendency rhs_nsw(const ModelState& s, const ModelParams& p) {
  check_state(s);
  // u u_x is written as (u^2/2)_x so the mean mode is exactly zero.
  SpectralField flux = multiply(s.u, s.u) * (0.5 * p.epsilon) + eta_of(s.h, p);
  return {mass_flux_tendency(s, p), -derivative(flux, 1)};
}

Tendency rhs_abcd(const ModelState& s, const ModelParams& p) {
  check_state(s);
  if (p.b < 0.0 || p.d < 0.0) throw ConfigError("abcd system requires b >= 0 and d >= 0");
  const SpectralField hu = multiply(s.h, s.u);
  const SpectralField half_u2 = multiply(s.u, s.u) * 0.5;
  const SpectralField eta = eta_of(s.h, p);

  SpectralField dh(s.grid_size());
  SpectralField du(s.grid_size());
  for (int n = 1; n <= s.h.max_mode(); ++n) {
    const double k = n;
    const Complex in(0.0, k);
    const Complex ik3(0.0, k * k * k);
    dh.set_mode(n, p.epsilon * (p.a * p.mu * ik3 * s.u[n] - in * hu[n]) / (1.0 + p.b * p.mu * k * k));
    du.set_mode(n, (p.c * p.mu * ik3 * s.h[n] - in * eta[n] - p.epsilon * in * half_u2[n]) /
                       (1.0 + p.d * p.mu * k * k));
  }
  return {std::move(dh), std::move(du)};
}

Tendency rhs_sgn(const ModelState& s, const ModelParams& p) {
  check_state(s);
  const double hmin = min_depth(s.h);
  if (hmin < p.h_min) {
    throw DegenerateDepth("SGN operator degenerate: min h = " + std::to_string(hmin) +
                          " < h_min = " + std::to_string(p.h_min));
  }
  const SpectralField ux = derivative(s.u, 1);
  const SpectralField uxx = derivative(s.u, 2);
  const SpectralField h3 = multiply(s.h, multiply(s.h, s.h));
  const SpectralField g = multiply(s.u, uxx) - multiply(ux, ux);

  // h times the explicit part of the velocity equation:
  //   -eps h (u^2/2)_x - h eta_x + (eps mu / 3) (h^3 (u u_xx - u_x^2))_x
  const SpectralField explicit_flux = derivative(multiply(s.u, s.u), 1) * (0.5 * p.epsilon) +
                                      derivative(eta_of(s.h, p), 1);
  const SpectralField weighted_rhs = derivative(multiply(h3, g), 1) * (p.epsilon * p.mu / 3.0) -
                                     multiply(s.h, explicit_flux);
  return {mass_flux_tendency(s, p), detail::solve_weighted_sgn(s.h, h3, weighted_rhs, p)};
}

Tendency evaluate_rhs(const ModelState& s, const ModelParams& p) {
  switch (p.variant) {
    case ModelVariant::NSW: return rhs_nsw(s, p);
    case ModelVariant::SGN: return rhs_sgn(s, p);
    case ModelVariant::ABCD: return rhs_abcd(s, p);
  }
  throw ConfigError("unknown model variant");
}

double hamiltonian(const ModelState& s, const ModelParams& p) {
  check_state(s);
  const int m = 2 * s.grid_size();
  const SpectralField eta = eta_of(s.h, p);
  const auto e = to_grid(eta, m);
  const auto ex = to_grid(derivative(eta, 1), m);
  const auto u = to_grid(s.u, m);
  const auto ux = to_grid(derivative(s.u, 1), m);
  double sum = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    sum += -p.c * ux[j] * ux[j] - p.a * ex[j] * ex[j] + e[j] * e[j] + (1.0 + e[j]) * u[j] * u[j];
  }
  return 0.5 * sum * (2.0 * std::numbers::pi / m);
}

}  // namespace swblow
