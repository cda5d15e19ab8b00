#include "swblow/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swblow/errors.hpp"

namespace swblow {

std::string_view to_string(JetSystem s) {
  return s == JetSystem::Full ? "full" : "simplified";
}

JetSystem parse_jet_system(std::string_view name) {
  if (name == "full") return JetSystem::Full;
  if (name == "simplified") return JetSystem::Simplified;
  throw ConfigError("unknown jet system '" + std::string(name) + "' (expected full or simplified)");
}

JetRate jet_rhs(const JetState& j) {
  const double quadratic = j.system == JetSystem::Full ? j.beta1 * j.beta1 : 0.0;
  return {-3.0 * j.beta1 * j.alpha2, -quadratic - j.alpha2};
}

namespace {

JetState rk4(const JetState& y, double h) {
  auto shifted = [&](const JetRate& k, double s) {
    JetState out = y;
    out.alpha2 += s * k.dalpha2;
    out.beta1 += s * k.dbeta1;
    return out;
  };
  const JetRate k1 = jet_rhs(y);
  const JetRate k2 = jet_rhs(shifted(k1, h / 2));
  const JetRate k3 = jet_rhs(shifted(k2, h / 2));
  const JetRate k4 = jet_rhs(shifted(k3, h));
  JetState out = y;
  out.alpha2 += h / 6 * (k1.dalpha2 + 2 * k2.dalpha2 + 2 * k3.dalpha2 + k4.dalpha2);
  out.beta1 += h / 6 * (k1.dbeta1 + 2 * k2.dbeta1 + 2 * k3.dbeta1 + k4.dbeta1);
  out.t += h;
  return out;
}

// Least-squares line through (t, 1/beta1); its root is the pole.
std::optional<double> fit_pole(const std::vector<JetState>& series, double threshold) {
  std::vector<const JetState*> tail;
  for (auto it = series.rbegin(); it != series.rend(); ++it) {
    if (std::abs(it->beta1) < threshold / 10.0 && tail.size() >= 3) break;
    tail.push_back(&*it);
  }
  if (tail.size() < 2) return std::nullopt;
  double t_mean = 0.0;
  for (const JetState* s : tail) t_mean += s->t;
  t_mean /= static_cast<double>(tail.size());
  double y_mean = 0.0;
  for (const JetState* s : tail) y_mean += 1.0 / s->beta1;
  y_mean /= static_cast<double>(tail.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const JetState* s : tail) {
    const double dt = s->t - t_mean;
    sxy += dt * (1.0 / s->beta1 - y_mean);
    sxx += dt * dt;
  }
  if (sxx == 0.0 || sxy == 0.0) return tail.front()->t;
  const double slope = sxy / sxx;
  return t_mean - y_mean / slope;
}

}  // namespace

JetRun integrate_jet(const JetState& j0, double dt, double t_end,
                     const JetIntegrationOptions& options) {
  if (!(dt > 0.0)) throw DomainError("integrate_jet requires dt > 0");
  JetRun run;
  run.series.push_back(j0);
  JetState y = j0;
  double h = dt;
  std::size_t steps = 0;
  while (y.t < t_end && steps < options.max_steps) {
    ++steps;
    const bool last = h >= t_end - y.t;
    const double trial = last ? t_end - y.t : h;
    const JetState full = rk4(y, trial);
    const JetState half = rk4(rk4(y, trial / 2), trial / 2);
    const double scale = std::max({1.0, std::abs(half.alpha2), std::abs(half.beta1)});
    const double err = std::max(std::abs(half.alpha2 - full.alpha2), std::abs(half.beta1 - full.beta1)) /
                       (15.0 * scale);
    if (!std::isfinite(err) || err > options.rel_tol) {
      h = trial * (std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(options.rel_tol / err, 0.2)) : 0.1);
      if (y.t + h == y.t) break;
      continue;
    }
    // Richardson-corrected acceptance
    JetState next = half;
    next.alpha2 += (half.alpha2 - full.alpha2) / 15.0;
    next.beta1 += (half.beta1 - full.beta1) / 15.0;
    next.t = last ? t_end : y.t + trial;
    y = next;
    run.series.push_back(y);
    if (std::abs(y.beta1) > options.blowup_threshold) {
      run.blew_up = true;
      break;
    }
    const double grow = err > 0.0 ? 0.9 * std::pow(options.rel_tol / err, 0.2) : 4.0;
    h = trial * std::clamp(grow, 0.2, 4.0);
  }
  if (run.blew_up) run.blowup_time = fit_pole(run.series, options.blowup_threshold);
  return run;
}

double riccati_upper_time(double beta1_0) {
  if (beta1_0 < 0.0) return -1.0 / beta1_0;
  return std::numeric_limits<double>::infinity();
}

double simplified_invariant(const JetState& j) { return j.alpha2 - 1.5 * j.beta1 * j.beta1; }

PointJet jet_from_state(const ModelState& s) {
  PointJet j;
  for (int i = 0; i < 4; ++i) {
    j.alpha[static_cast<std::size_t>(i)] = evaluate_at(derivative(s.h, i), 0.0);
    j.beta[static_cast<std::size_t>(i)] = evaluate_at(derivative(s.u, i), 0.0);
  }
  return j;
}

double acd_alpha0_rate(const PointJet& j, double a) {
  return -a * j.beta[3] - j.alpha[0] * j.beta[1];
}

}  // namespace swblow
