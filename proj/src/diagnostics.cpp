#include "swblow/diagnostics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swblow/errors.hpp"
#include "swblow/singular_quadrature.hpp"

namespace swblow {

AnalyticityFit analyticity_fit(const SpectralField& f, double floor) {
  if (!(floor > 0.0)) throw DomainError("analyticity floor must be positive");
  std::vector<double> ks;
  std::vector<double> logs;
  for (int k = 1; k <= f.max_mode(); ++k) {
    const double amp = std::abs(f[k]);
    if (amp > floor) {
      ks.push_back(k);
      logs.push_back(std::log(amp));
    }
  }
  AnalyticityFit fit;
  fit.usable_modes = static_cast<int>(ks.size());
  fit.degenerate = fit.usable_modes < kAnalyticityMinModes;
  if (ks.empty()) {
    fit.tau = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.k_lo = static_cast<int>(ks.front());
  fit.k_hi = static_cast<int>(ks.back());
  if (ks.size() == 1) {
    fit.tau = std::numeric_limits<double>::infinity();
    fit.log_amp = logs.front();
    return fit;
  }
  const double n = static_cast<double>(ks.size());
  double k_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    k_mean += ks[i];
    y_mean += logs[i];
  }
  k_mean /= n;
  y_mean /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - k_mean) * (logs[i] - y_mean);
    sxx += (ks[i] - k_mean) * (ks[i] - k_mean);
  }
  const double slope = sxy / sxx;
  fit.log_amp = y_mean - slope * k_mean;
  fit.tau = std::max(0.0, -slope);
  double ss = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double r = logs[i] - (fit.log_amp + slope * ks[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::string_view to_string(EnergyCase c) { return c == EnergyCase::Case1 ? "case1" : "case2"; }

std::optional<EnergyCase> energy_case_for(const ModelParams& p) {
  if (p.variant != ModelVariant::ABCD) return std::nullopt;
  if (p.b > 0.0 && p.d > 0.0) return EnergyCase::Case1;
  if (p.b == 0.0 && p.c == 0.0 && p.d > 0.0) return EnergyCase::Case2;
  return std::nullopt;
}

double shrink_rate(const ModelParams& p, double frak_E0) {
  if (p.b > 0.0 && p.d > 0.0) return std::max(std::abs(p.a) / p.b, std::abs(p.c) / p.d) + 1.0;
  if (p.b == 0.0 && p.c == 0.0 && p.d > 0.0) {
    if (!(frak_E0 >= 0.0)) throw DomainError("second-case shrink rate needs a nonnegative initial energy");
    return std::max(std::abs(p.a), 2.0 / p.d + 4.0 * frak_E0) + 1.0;
  }
  throw DomainError("analytic local existence covers only b, d > 0 or b = c = 0, d > 0 (got b = " +
                    std::to_string(p.b) + ", c = " + std::to_string(p.c) + ", d = " +
                    std::to_string(p.d) + ")");
}

EnergySample energy_sample(const ModelState& s, double k_rate, EnergyCase energy_case) {
  EnergySample e;
  e.t = s.t;
  e.k_rate = k_rate;
  e.energy_case = energy_case;
  e.nu = kStripStart - k_rate * std::abs(s.t);
  if (e.nu <= kStripFloor) {
    throw StripExhausted("strip width nu = " + std::to_string(e.nu) + " at t = " + std::to_string(s.t) +
                         " is not above " + std::to_string(kStripFloor));
  }
  const SpectralField& second = energy_case == EnergyCase::Case1 ? s.u : derivative(s.u, 2);
  e.energy = x_tau_norm(s.h, e.nu) + x_tau_norm(second, e.nu);
  return e;
}

std::optional<EnergyContext> energy_context(const ModelState& s0, const ModelParams& p) {
  const auto which = energy_case_for(p);
  if (!which) return std::nullopt;
  double frak_E0 = 0.0;
  if (*which == EnergyCase::Case2) {
    frak_E0 = x_tau_norm(s0.h, kStripStart) + x_tau_norm(derivative(s0.u, 2), kStripStart);
  }
  return EnergyContext{*which, shrink_rate(p, frak_E0)};
}

// ---------------------------------------------------------------------------

bool FunctionalSample::all_hypotheses_ok() const {
  return std::all_of(hypotheses_ok.begin(), hypotheses_ok.end(), [](bool b) { return b; });
}

namespace {

struct HypothesisFields {
  std::vector<double> h, u, hx, hxxx, uxx;
};

HypothesisFields sample_hypothesis_fields(const ModelState& s, std::span<const double> xs) {
  return {evaluate_at(s.h, xs), evaluate_at(s.u, xs), evaluate_at(derivative(s.h, 1), xs),
          evaluate_at(derivative(s.h, 3), xs), evaluate_at(derivative(s.u, 2), xs)};
}

std::vector<double> uniform_points(double length, int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) xs[static_cast<std::size_t>(j)] = length * j / (points - 1);
  return xs;
}

}  // namespace

HypothesisFlags check_hypotheses(const ModelState& s, const ModelParams& p, double omega,
                                 double sigma, int points) {
  const auto xs = uniform_points(omega, points);
  const auto f = sample_hypothesis_fields(s, xs);
  constexpr double tol = kHypothesisTolerance;
  HypothesisFlags ok{true, true, true, true, true};
  for (std::size_t j = 0; j < xs.size(); ++j) {
    ok[0] = ok[0] && f.h[j] + sigma <= tol;
    ok[1] = ok[1] && f.u[j] <= tol;
    ok[2] = ok[2] && f.hx[j] >= -tol;
    ok[3] = ok[3] && p.c * f.hxxx[j] >= -tol;
    ok[4] = ok[4] && p.a * f.uxx[j] >= -tol;
  }
  return ok;
}

FunctionalSample singular_functionals(const ModelState& s, const ModelParams& p, double lambda,
                                      double omega, double sigma, int cells) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw DomainError("lambda must lie strictly inside (0, 1/2)");
  if (!(omega > 0.0 && omega <= std::numbers::pi)) throw DomainError("omega must lie in (0, pi]");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const SingularQuadrature rule(lambda, omega, cells);
  const auto moments = rule.fourier_moments(s.h.max_mode());
  FunctionalSample fs;
  fs.lambda = lambda;
  fs.omega = omega;
  fs.sigma = sigma;
  fs.F_h = -integrate_with_moments(s.h, moments);
  fs.F_u = -integrate_with_moments(s.u, moments);
  fs.hypotheses_ok = check_hypotheses(s, p, omega, sigma);
  return fs;
}

RateBounds functional_rate_bounds(const FunctionalSample& fs) {
  if (!fs.all_hypotheses_ok()) {
    std::string failed;
    for (std::size_t i = 0; i < fs.hypotheses_ok.size(); ++i) {
      if (!fs.hypotheses_ok[i]) failed += (failed.empty() ? "" : ", ") + std::to_string(i + 1);
    }
    throw HypothesesViolated("growth inequalities need all five hypotheses; failed: " + failed);
  }
  return {fs.lambda * fs.sigma / fs.omega * fs.F_u,
          fs.lambda / (2.0 * std::pow(fs.omega, 2.0 - fs.lambda)) * fs.F_u * fs.F_u};
}

double riccati_lower_blowup_time(double F_u0, double lambda, double omega) {
  if (!(F_u0 > 0.0)) throw DomainError("Riccati comparison needs F_u(0) > 0");
  return 2.0 * std::pow(omega, 2.0 - lambda) / (lambda * F_u0);
}

MonitorGeometry monitor_geometry(const ModelState& s, const ModelParams& p, int scan_points) {
  const auto xs = uniform_points(std::numbers::pi, scan_points);
  const auto f = sample_hypothesis_fields(s, xs);
  constexpr double tol = kHypothesisTolerance;
  std::size_t last = 0;
  bool any = false;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const bool ok = f.h[j] < 0.0 && f.u[j] <= tol && f.hx[j] >= -tol && p.c * f.hxxx[j] >= -tol &&
                    p.a * f.uxx[j] >= -tol;
    if (!ok) break;
    last = j;
    any = true;
  }
  MonitorGeometry g;
  if (!any || last == 0) return g;
  g.found = true;
  g.omega = xs[last];
  g.sigma = -*std::max_element(f.h.begin(), f.h.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return g;
}

// ---------------------------------------------------------------------------

double sign_change_criterion_b(const SpectralField& h0, const SpectralField& u0, double a, double b) {
  if (!(b > 0.0)) throw DomainError("sign-change criterion requires b > 0");
  const SpectralField flux = derivative(u0, 2) * a + multiply(h0, u0);
  const SpectralField rate = apply_multiplier(derivative(flux, 1), [&](int k) {
    return -1.0 / (1.0 + b * static_cast<double>(k) * k);
  });
  return evaluate_at(rate, 0.0);
}

double sign_change_criterion_kernel(const SpectralField& h0, const SpectralField& u0, double a,
                                    double b) {
  if (!(b > 0.0)) throw DomainError("sign-change criterion requires b > 0");
  const double root_b = std::sqrt(b);
  const SpectralField bracket = derivative(multiply(h0, u0), 1) + derivative(u0, 1) * (a / b);
  const int images =
      static_cast<int>(std::ceil(15.0 * std::numbers::ln10 * root_b / (2.0 * std::numbers::pi))) + 1;
  auto integrand = [&](double y) {
    double kernel = 0.0;
    for (int n = -images; n <= images; ++n) {
      kernel += std::exp(-std::abs(y + 2.0 * std::numbers::pi * n) / root_b);
    }
    return kernel * evaluate_at(bracket, y);
  };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  // The kernel has a cusp at y = 0, so each half is integrated separately.
  const double integral = Rule::integrate(integrand, -std::numbers::pi, 0.0, 20, 1e-14) +
                          Rule::integrate(integrand, 0.0, std::numbers::pi, 20, 1e-14);
  return (a / b) * evaluate_at(derivative(u0, 1), 0.0) - integral / (2.0 * root_b);
}

// ---------------------------------------------------------------------------

DiagnosticsSample sample_diagnostics(const ModelState& s, const ModelParams& p,
                                     const DiagnosticsConfig& cfg,
                                     const std::optional<EnergyContext>& energy) {
  DiagnosticsSample out;
  out.t = s.t;
  out.mean_h = s.h.mean();
  out.mean_u = s.u.mean();
  if (cfg.jets) out.jet = jet_from_state(s);
  if (cfg.energies && energy) {
    try {
      out.energy = energy_sample(s, energy->k_rate, energy->energy_case);
    } catch (const StripExhausted&) {
    }
  }
  if (cfg.analyticity) {
    out.fit_h = analyticity_fit(s.h, cfg.analyticity_floor);
    out.fit_u = analyticity_fit(s.u, cfg.analyticity_floor);
  }
  if (cfg.hamiltonian) out.hamiltonian = hamiltonian(s, p);
  if (cfg.functionals) {
    MonitorGeometry g;
    if (cfg.omega && cfg.sigma) {
      g = {true, *cfg.omega, *cfg.sigma};
    } else {
      g = monitor_geometry(s, p);
      if (cfg.omega) g.omega = *cfg.omega;
      if (cfg.sigma) g.sigma = *cfg.sigma;
    }
    if (g.found && g.sigma > 0.0) {
      out.functionals = singular_functionals(s, p, cfg.lambda, g.omega, g.sigma, cfg.quadrature_cells);
      if (out.functionals->all_hypotheses_ok()) out.bounds = functional_rate_bounds(*out.functionals);
    }
  }
  return out;
}

}  // namespace swblow
