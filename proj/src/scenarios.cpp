#include "swblow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "swblow/errors.hpp"
#include "swblow/format.hpp"
#include "swblow/singular_quadrature.hpp"

namespace swblow {

bool ScenarioReport::all_hypotheses_passed() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const HypothesisCheck& c) { return c.passed; });
}

std::optional<double> ScenarioReport::outcome(std::string_view key) const {
  for (const auto& [k, v] : outcomes) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void ScenarioReport::set_outcome(std::string key, double value) {
  for (auto& [k, v] : outcomes) {
    if (k == key) {
      v = value;
      return;
    }
  }
  outcomes.emplace_back(std::move(key), value);
}

std::string ScenarioReport::to_text() const {
  std::ostringstream out;
  out << "scenario = " << id << "\n\n[hypotheses]\n";
  for (const auto& h : hypotheses) {
    out << h.name << ".description = " << h.description << "\n";
    out << h.name << ".measured = " << format_number(h.measured) << "\n";
    out << h.name << ".threshold = " << format_number(h.threshold) << "\n";
    out << h.name << ".passed = " << (h.passed ? "true" : "false") << "\n";
  }
  out << "\n[outcomes]\n";
  for (const auto& [k, v] : outcomes) out << k << " = " << format_number(v) << "\n";
  out << "\n[notes]\n";
  for (std::size_t i = 0; i < notes.size(); ++i) out << "note" << i << " = " << notes[i] << "\n";
  out << "\n[files]\n";
  for (std::size_t i = 0; i < files.size(); ++i) out << "file" << i << " = " << files[i] << "\n";
  return out.str();
}

namespace {

template <class F>
SpectralField field_from(int n, F&& f) {
  return transform_forward(GridField::sample(n, std::forward<F>(f)));
}

std::vector<double> validation_points() {
  std::vector<double> xs(kValidationPoints);
  for (int j = 0; j < kValidationPoints; ++j) xs[static_cast<std::size_t>(j)] = GridField::node(j, kValidationPoints);
  return xs;
}

HypothesisCheck check(std::string name, std::string description, double measured, double threshold,
                      bool passed) {
  return {std::move(name), std::move(description), measured, threshold, passed};
}

// min over validation points with lo < |x| < hi of values
double min_on_band(const std::vector<double>& xs, const std::vector<double>& values, double lo, double hi) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double ax = std::abs(xs[j]);
    if (ax > lo && ax < hi) m = std::min(m, values[j]);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

DrySpotData make_dry_spot_data(double steepness, int n) {
  if (!(steepness > 0.0)) throw DomainError("dry-spot steepness must be positive");
  if (n < 32) throw DomainError("dry-spot data needs N >= 32");
  validate_grid_size(n);
  DrySpotData d;
  SpectralField h(n);
  h.set_mode(0, 1.0);
  h.set_mode(1, -0.5);
  SpectralField u(n);
  u.set_mode(1, Complex(0.0, 0.5 * steepness));  // -s sin x = -s (e^{ix} - e^{-ix}) / 2i
  d.state = ModelState{h, u, 0.0};
  d.jet = jet_from_state(d.state);

  const auto xs = validation_points();
  const auto hv = evaluate_at(h, xs);
  const double hmin = *std::min_element(hv.begin(), hv.end());
  auto& r = d.checks;
  r.id = "dryspot";
  r.hypotheses.push_back(check("A1", "min depth h0 on the validation grid is nonnegative", hmin, 0.0, hmin >= -1e-14));
  r.hypotheses.push_back(check("A2.depth", "h0(0) vanishes", d.jet.alpha[0], 0.0, std::abs(d.jet.alpha[0]) <= 1e-14));
  r.hypotheses.push_back(check("A2.curvature", "h0''(0) is nonnegative", d.jet.alpha[2], 0.0, d.jet.alpha[2] >= 0.0));
  r.hypotheses.push_back(check("A3", "u0'(0) is negative", d.jet.beta[1], 0.0, d.jet.beta[1] < 0.0));
  if (!r.all_hypotheses_passed()) throw ConstructionFailed("dry-spot data failed its own validation");
  r.set_outcome("steepness", steepness);
  r.set_outcome("mean_h", h.mean());
  r.set_outcome("mean_u", u.mean());
  return d;
}

ScenarioReport run_dry_spot_reduction(double steepness, int n, const DrySpotOptions& opt) {
  DrySpotData d = make_dry_spot_data(steepness, n);
  ScenarioReport r = d.checks;
  r.notes.push_back("jet ODE only: the PDE operator degenerates at the dry point");
  const JetState j0{d.jet.alpha[2], d.jet.beta[1], 0.0, opt.system};
  const JetRun run = integrate_jet(j0, opt.dt, opt.t_end);
  r.set_outcome("alpha2_0", j0.alpha2);
  r.set_outcome("beta1_0", j0.beta1);
  r.set_outcome("riccati_upper_time", riccati_upper_time(j0.beta1));
  r.set_outcome("blew_up", run.blew_up ? 1.0 : 0.0);
  r.set_outcome("blowup_time", run.blowup_time.value_or(std::numeric_limits<double>::quiet_NaN()));
  r.set_outcome("final_time", run.series.back().t);
  r.set_outcome("final_beta1", run.series.back().beta1);
  return r;
}

// ---------------------------------------------------------------------------

SignChangeData make_sign_change_data(double sigma, double a, int n) {
  if (!(a < 0.0)) throw DomainError("sign-change data needs a < 0 so that a u0'''(0) > 0 is possible");
  if (!(sigma > 0.0)) throw DomainError("sign-change margin sigma must be positive");
  if (n < 16) throw DomainError("sign-change data needs N >= 16");
  validate_grid_size(n);
  SignChangeData d;
  d.c1 = std::max(1.0, 1.25 * sigma / std::cos(0.5));
  const double far = 1.0 - std::cos(1.0);
  d.c2 = std::max(0.0, (1.25 - d.c1 * (1.0 - std::cos(0.5))) / (far * far));
  d.gamma = -2.0;
  const double c1 = d.c1;
  const double c2 = d.c2;
  const double gamma = d.gamma;
  const SpectralField h = field_from(n, [&](double x) {
    const double w = 1.0 - std::cos(2.0 * x);
    return c1 * (1.0 - std::cos(x)) + c2 * w * w;
  });
  const SpectralField u = field_from(n, [&](double x) {
    const double s = std::sin(x / 2);
    return std::sin(x) * (s * s - gamma);
  });
  d.state = ModelState{h, u, 0.0};

  const PointJet jet = jet_from_state(d.state);
  const auto xs = validation_points();
  const auto hv = evaluate_at(h, xs);
  const auto hxx = evaluate_at(derivative(h, 2), xs);
  const double positive = min_on_band(xs, hv, 1e-300, 4.0);
  const double far_min = min_on_band(xs, hv, 0.5, std::numbers::pi);
  const double curv_min = min_on_band(xs, hxx, -1.0, 0.5);
  auto& r = d.checks;
  r.id = "sign_change_data";
  r.hypotheses.push_back(check("A1", "a u0'''(0) is positive", a * jet.beta[3], 0.0, a * jet.beta[3] > 0.0));
  r.hypotheses.push_back(check("A2", "h0(0) vanishes", jet.alpha[0], 0.0, std::abs(jet.alpha[0]) <= 1e-13));
  r.hypotheses.push_back(check("A3.positive", "min h0 over x != 0", positive, 0.0, positive > 0.0));
  r.hypotheses.push_back(check("A3.far", "min h0 over 0.5 < |x| < pi", far_min, 1.0, far_min > 1.0));
  r.hypotheses.push_back(check("A4", "min h0'' over |x| < 0.5", curv_min, sigma, curv_min > sigma));
  if (!r.all_hypotheses_passed()) {
    throw ConstructionFailed("sign-change data failed validation for sigma = " + format_number(sigma));
  }
  r.set_outcome("c1", c1);
  r.set_outcome("c2", c2);
  r.set_outcome("gamma", gamma);
  r.set_outcome("alpha0_rate_t0", acd_alpha0_rate(jet, a));
  return d;
}

namespace {

double depth_at_origin(const ModelState& s) { return evaluate_at(s.h, 0.0); }

double depth_rate_at_origin(const ModelState& s, const ModelParams& p) {
  return evaluate_at(evaluate_rhs(s, p).dh, 0.0);
}

ModelState march(ModelState s, double span, int substeps, const ModelParams& p) {
  for (int i = 0; i < substeps; ++i) s = step_rk4(s, span / substeps, p);
  return s;
}

// Fourth-order central difference of h(t, 0) from short RK4 marches.
double origin_slope(const ModelState& s, double step, const ModelParams& p) {
  auto at = [&](double span) { return depth_at_origin(march(s, span, 8, p)); };
  return (8.0 * (at(step) - at(-step)) - (at(2 * step) - at(-2 * step))) / (12.0 * step);
}

// Root of the cubic Hermite interpolant on [t0, t1] given values and slopes.
double hermite_root(double t0, double t1, double f0, double f1, double d0, double d1) {
  const double h = t1 - t0;
  auto eval = [&](double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * f1 +
           (s3 - s2) * h * d1;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((eval(mid) > 0.0) == (f0 > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return t0 + 0.5 * (lo + hi) * h;
}

}  // namespace

Theorem2Result run_theorem2_construction(const ModelState& s0, const ModelParams& p, double delta,
                                         const Theorem2Options& opt) {
  if (p.variant != ModelVariant::ABCD || p.b != 0.0 || p.c != 0.0 || p.d < 0.0) {
    throw DomainError("sign-change construction needs the abcd system with b = c = 0 and d >= 0");
  }
  if (!(delta > 0.0)) throw DomainError("sign-change construction needs delta > 0");
  if (!(opt.sigma > 0.0)) throw DomainError("sign-change construction needs sigma > 0");

  Theorem2Result res;
  ScenarioReport& r = res.report;
  r.id = "theorem2";
  const auto xs = validation_points();

  double d = delta;
  bool margins = false;
  for (int attempt = 0; attempt <= opt.max_halvings; ++attempt, d /= 2) {
    IntegratorConfig back;
    back.dt = std::min(opt.dt, d / 8);
    back.dt_min = back.dt * 1e-6;
    back.t_end = s0.t - d;
    back.record_every = 1'000'000;
    back.symmetry_projection = opt.symmetry_projection;
    const Trajectory tr = integrate(s0, p, back);
    if (tr.termination.status != Termination::Completed) {
      throw ConstructionFailed("backward integration stopped: " + tr.termination.reason);
    }
    const ModelState& hb = tr.states.back();
    const auto hv = evaluate_at(hb.h, xs);
    const auto hxx = evaluate_at(derivative(hb.h, 2), xs);
    const double h0 = depth_at_origin(hb);
    const double far_min = min_on_band(xs, hv, 0.5, std::numbers::pi);
    const double curv_min = min_on_band(xs, hxx, -1.0, 0.5);
    r.hypotheses.clear();
    r.hypotheses.push_back(check("backward.origin", "hbar0(0) is positive", h0, 0.0, h0 > 0.0));
    r.hypotheses.push_back(check("backward.far", "min hbar0 over 0.5 < |x| < pi", far_min, 0.5, far_min > 0.5));
    r.hypotheses.push_back(check("backward.curvature", "min hbar0'' over |x| < 0.5", curv_min, opt.sigma / 2,
                                 curv_min > opt.sigma / 2));
    if (r.all_hypotheses_passed()) {
      res.backward_state = hb;
      res.delta = d;
      margins = true;
      break;
    }
    r.notes.push_back("margins failed at delta = " + format_number(d) + ", halving");
  }
  if (!margins) {
    throw DeltaTooLarge("backward state violates the positivity margins after " +
                        std::to_string(opt.max_halvings) + " halvings");
  }

  ModelState start = res.backward_state;
  start.t = 0.0;
  IntegratorConfig fwd;
  fwd.dt = std::min(opt.dt, res.delta / 8);
  fwd.dt_min = fwd.dt * 1e-6;
  fwd.t_end = 2 * res.delta;
  fwd.record_every = 1;
  fwd.symmetry_projection = opt.symmetry_projection;
  res.forward = integrate(start, p, fwd);
  const ModelState& last = res.forward.states.back();
  const double h_end = depth_at_origin(last);
  r.hypotheses.push_back(check("forward.end", "h(2 delta, 0) is negative", h_end, 0.0,
                               h_end < 0.0 && res.forward.termination.status == Termination::Completed));

  const auto& st = res.forward.states;
  for (std::size_t i = 1; i < st.size(); ++i) {
    const double f0 = depth_at_origin(st[i - 1]);
    const double f1 = depth_at_origin(st[i]);
    if (f0 > 0.0 && f1 <= 0.0) {
      res.sign_change_time = hermite_root(st[i - 1].t, st[i].t, f0, f1, depth_rate_at_origin(st[i - 1], p),
                                          depth_rate_at_origin(st[i], p));
      break;
    }
  }

  const PointJet jet = jet_from_state(start);
  res.slope_predicted = acd_alpha0_rate(jet, p.a);
  res.slope_measured = origin_slope(start, opt.fd_step, p);
  res.linear_prediction = -jet.alpha[0] / res.slope_predicted;

  const PointJet jet0 = jet_from_state(s0);

  r.set_outcome("delta", res.delta);
  r.set_outcome("hbar0_origin", jet.alpha[0]);
  r.set_outcome("h_end_origin", h_end);
  r.set_outcome("sign_change_time", res.sign_change_time.value_or(std::numeric_limits<double>::quiet_NaN()));
  r.set_outcome("linear_prediction", res.linear_prediction);
  r.set_outcome("slope_measured", res.slope_measured);
  r.set_outcome("slope_predicted", res.slope_predicted);
  r.set_outcome("slope_relative_error",
                std::abs(res.slope_measured - res.slope_predicted) / std::abs(res.slope_predicted));
  r.set_outcome("original_slope_measured", origin_slope(s0, opt.fd_step, p));
  r.set_outcome("original_slope_predicted", acd_alpha0_rate(jet0, p.a));
  r.set_outcome("symmetry_projection", opt.symmetry_projection ? 1.0 : 0.0);
  return res;
}

// ---------------------------------------------------------------------------

ModelState make_theorem3_data(double beta, double gamma, int n) {
  validate_grid_size(n);
  SpectralField h(n);
  h.set_mode(0, -1.0);
  h.set_mode(1, -0.5 * beta);
  SpectralField u(n);
  // -gamma sin x + (gamma / 4) sin 2x
  u.set_mode(1, Complex(0.0, 0.5 * gamma));
  u.set_mode(2, Complex(0.0, -0.125 * gamma));
  return ModelState{h, u, 0.0};
}

namespace {

struct FunctionalPair {
  double F_h;
  double F_u;
};

// Central difference on records; five points when the spacing is uniform.
std::optional<double> fd_rate(std::span<const ModelState> states, std::span<const double> F, std::size_t i,
                              int& points) {
  const std::size_t n = states.size();
  auto t = [&](std::size_t k) { return states[k].t; };
  if (i >= 2 && i + 2 < n) {
    const double h = t(i + 1) - t(i);
    const double tol = 1e-9 * std::abs(h);
    if (std::abs(t(i + 2) - t(i + 1) - h) <= tol && std::abs(t(i) - t(i - 1) - h) <= tol &&
        std::abs(t(i - 1) - t(i - 2) - h) <= tol) {
      points = 5;
      return (F[i - 2] - 8 * F[i - 1] + 8 * F[i + 1] - F[i + 2]) / (12 * h);
    }
  }
  if (i >= 1 && i + 1 < n) {
    const double h0 = t(i) - t(i - 1);
    const double h1 = t(i + 1) - t(i);
    points = 3;
    return -h1 / (h0 * (h0 + h1)) * F[i - 1] + (h1 - h0) / (h0 * h1) * F[i] + h0 / (h1 * (h0 + h1)) * F[i + 1];
  }
  points = 0;
  return std::nullopt;
}

}  // namespace

std::vector<InequalitySlice> check_functional_inequalities(std::span<const ModelState> states,
                                                           const ModelParams& p, double lambda,
                                                           double slack, int cells) {
  std::vector<InequalitySlice> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    InequalitySlice sl;
    sl.t = states[i].t;
    sl.geometry = monitor_geometry(states[i], p);
    if (!sl.geometry.found || !(sl.geometry.sigma > 0.0)) {
      out.push_back(sl);
      continue;
    }
    sl.functionals = singular_functionals(states[i], p, lambda, sl.geometry.omega, sl.geometry.sigma, cells);
    sl.hypotheses_ok = sl.functionals.all_hypotheses_ok();
    const SingularQuadrature rule(lambda, sl.geometry.omega, cells);
    const auto moments = rule.fourier_moments(states[i].h.max_mode());
    const Tendency rate = evaluate_rhs(states[i], p);
    sl.rate_h_rhs = -integrate_with_moments(rate.dh, moments);
    sl.rate_u_rhs = -integrate_with_moments(rate.du, moments);

    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(states.size(), i + 3);
    std::vector<double> Fh(states.size(), 0.0);
    std::vector<double> Fu(states.size(), 0.0);
    for (std::size_t k = lo; k < hi; ++k) {
      Fh[k] = -integrate_with_moments(states[k].h, moments);
      Fu[k] = -integrate_with_moments(states[k].u, moments);
    }
    sl.rate_h_fd = fd_rate(states, Fh, i, sl.fd_points);
    sl.rate_u_fd = fd_rate(states, Fu, i, sl.fd_points);

    if (sl.hypotheses_ok) {
      sl.bounds = functional_rate_bounds(sl.functionals);
      bool ok = sl.rate_h_rhs >= sl.bounds->h_rate_lb - slack && sl.rate_u_rhs >= sl.bounds->u_rate_lb - slack;
      if (sl.rate_h_fd) ok = ok && *sl.rate_h_fd >= sl.bounds->h_rate_lb - slack;
      if (sl.rate_u_fd) ok = ok && *sl.rate_u_fd >= sl.bounds->u_rate_lb - slack;
      sl.verified = ok;
    }
    out.push_back(sl);
  }
  return out;
}

Theorem3Result run_theorem3_monitor(const ModelState& s0, const ModelParams& p, double horizon,
                                    const Theorem3Options& opt) {
  if (p.variant != ModelVariant::ABCD || p.b != 0.0 || p.d != 0.0 || p.a > 0.0 || p.c > 0.0) {
    throw DomainError("functional monitor needs the abcd system with b = d = 0 and a, c <= 0");
  }
  if (!(horizon > 0.0)) throw DomainError("monitor horizon must be positive");
  Theorem3Result res;
  ScenarioReport& r = res.report;
  r.id = "theorem3";
  r.notes.push_back("zero-mean check of eta disabled: the well at the origin forces mean(h) != 1");

  IntegratorConfig cfg;
  cfg.dt = opt.dt;
  cfg.dt_min = opt.dt * 1e-6;
  cfg.t_end = s0.t + horizon;
  cfg.record_every = opt.record_every;
  cfg.symmetry_projection = opt.symmetry_projection;
  res.trajectory = integrate(s0, p, cfg);
  res.slices = check_functional_inequalities(res.trajectory.states, p, opt.lambda, opt.slack, opt.cells);

  int held = 0;
  int verified = 0;
  double worst_h = std::numeric_limits<double>::infinity();
  double worst_u = std::numeric_limits<double>::infinity();
  for (const auto& sl : res.slices) {
    if (!sl.hypotheses_ok) {
      if (!res.first_violation_time) res.first_violation_time = sl.t;
      continue;
    }
    ++held;
    if (sl.verified) ++verified;
    if (!res.riccati_time) {
      res.riccati_time = sl.t + riccati_lower_blowup_time(sl.functionals.F_u, opt.lambda, sl.geometry.omega);
    }
    const double rh = sl.rate_h_fd.value_or(sl.rate_h_rhs);
    const double ru = sl.rate_u_fd.value_or(sl.rate_u_rhs);
    worst_h = std::min(worst_h, rh - sl.bounds->h_rate_lb);
    worst_u = std::min(worst_u, ru - sl.bounds->u_rate_lb);
  }

  const auto& first = res.slices.front();
  r.hypotheses.push_back(check("initial.geometry", "monitor interval length omega at t0", first.geometry.omega,
                               0.0, first.geometry.found));
  for (std::size_t k = 0; k < 5; ++k) {
    r.hypotheses.push_back(check("initial.H" + std::to_string(k + 1), "hypothesis holds on [0, omega] at t0",
                                 first.functionals.hypotheses_ok[k] ? 1.0 : 0.0, 1.0,
                                 first.functionals.hypotheses_ok[k]));
  }
  r.set_outcome("slices", static_cast<double>(res.slices.size()));
  r.set_outcome("slices_with_hypotheses", held);
  r.set_outcome("slices_verified", verified);
  r.set_outcome("worst_h_margin", held ? worst_h : std::numeric_limits<double>::quiet_NaN());
  r.set_outcome("worst_u_margin", held ? worst_u : std::numeric_limits<double>::quiet_NaN());
  r.set_outcome("first_violation_time", res.first_violation_time.value_or(std::numeric_limits<double>::quiet_NaN()));
  r.set_outcome("riccati_time", res.riccati_time.value_or(std::numeric_limits<double>::quiet_NaN()));
  r.set_outcome("termination_time", res.trajectory.termination.t);
  r.set_outcome("blowup_detected", res.trajectory.termination.status == Termination::BlowupDetected ? 1.0 : 0.0);
  const ModelState& last = res.trajectory.states.back();
  r.set_outcome("final_norm", x_tau_norm(last.h, 0.0) + x_tau_norm(last.u, 0.0));
  r.notes.push_back(std::string("termination: ") + std::string(to_string(res.trajectory.termination.status)) +
                    (res.trajectory.termination.reason.empty() ? "" : " (" + res.trajectory.termination.reason + ")"));
  return res;
}

}  // namespace swblow
