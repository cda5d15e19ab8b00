#include "swblow/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swblow/errors.hpp"

namespace swblow {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator.dt must be positive");
  if (!std::isfinite(t_end)) throw ConfigError("integrator.t_end must be finite");
  if (record_every < 1) throw ConfigError("integrator.record_every must be at least 1");
  if (!(blowup_norm_threshold > 0.0)) throw ConfigError("integrator.blowup_norm_threshold must be positive");
  if (!(dt_min > 0.0)) throw ConfigError("integrator.dt_min must be positive");
  if (!(dt_min < dt)) throw ConfigError("integrator.dt_min must be smaller than integrator.dt");
  if (!(rel_tol > 0.0)) throw ConfigError("integrator.rel_tol must be positive");
  if (!(analyticity_floor > 0.0)) throw ConfigError("integrator.analyticity_floor must be positive");
  if (max_steps == 0) throw ConfigError("integrator.max_steps must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BlowupDetected: return "blowup";
    case Termination::SolverError: return "solver_error";
  }
  return "unknown";
}

std::string_view to_string(BlowupKind k) {
  switch (k) {
    case BlowupKind::None: return "none";
    case BlowupKind::NormThreshold: return "norm_threshold";
    case BlowupKind::AnalyticityCollapse: return "analyticity_collapse";
    case BlowupKind::DtUnderflow: return "dt_underflow";
  }
  return "unknown";
}

ModelState step_rk4(const ModelState& s, double dt, const ModelParams& p) {
  if (dt == 0.0) return s;
  auto stage = [&](const Tendency& k, double w) {
    ModelState out{s.h + k.dh * w, s.u + k.du * w, s.t + w};
    return out;
  };
  const Tendency k1 = evaluate_rhs(s, p);
  const Tendency k2 = evaluate_rhs(stage(k1, dt / 2), p);
  const Tendency k3 = evaluate_rhs(stage(k2, dt / 2), p);
  const Tendency k4 = evaluate_rhs(stage(k3, dt), p);
  ModelState out = s;
  out.h += (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh) * (dt / 6);
  out.u += (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du) * (dt / 6);
  out.t = s.t + dt;
  return out;
}

namespace {

double max_abs_difference(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (int k = 0; k <= a.max_mode(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double step_error(const ModelState& coarse, const ModelState& fine) {
  const double diff = std::max(max_abs_difference(coarse.h, fine.h), max_abs_difference(coarse.u, fine.u));
  const double scale = std::max({1.0, fine.h.max_abs_coefficient(), fine.u.max_abs_coefficient()});
  return diff / (15.0 * scale);
}

void project(ModelState& s) {
  s.h = even_part(s.h);
  s.u = odd_part(s.u);
}

class Marcher {
 public:
  Marcher(const ModelParams& p, const IntegratorConfig& cfg) : p_(p), cfg_(cfg) {}

  Trajectory run(const ModelState& s0, const DiagnosticsConfig* diag,
                 std::vector<DiagnosticsSample>* samples) {
    Trajectory tr;
    const double t0 = s0.t;
    const double dir = cfg_.t_end >= t0 ? 1.0 : -1.0;
    const double record_span = cfg_.dt * cfg_.record_every;
    const std::optional<EnergyContext> energy = diag ? energy_context(s0, p_) : std::nullopt;
    auto record = [&](const ModelState& s) {
      tr.states.push_back(s);
      if (diag) samples->push_back(sample_diagnostics(s, p_, *diag, energy));
    };

    ModelState y = s0;
    if (cfg_.symmetry_projection) project(y);
    record(y);
    tr.termination.t = y.t;
    double h = cfg_.dt;
    long record_index = 1;
    auto next_record = [&] {
      const double target = t0 + dir * record_span * static_cast<double>(record_index);
      return dir > 0 ? std::min(target, cfg_.t_end) : std::max(target, cfg_.t_end);
    };
    bool recorded_last = true;

    auto finish = [&](Termination status, BlowupKind kind, std::string reason) {
      tr.termination.status = status;
      tr.termination.blowup = kind;
      tr.termination.reason = std::move(reason);
      tr.termination.t = y.t;
      if (!recorded_last) {
        if (cfg_.symmetry_projection) project(y);
        record(y);
      }
      return tr;
    };

    while (dir * (cfg_.t_end - y.t) > 0.0) {
      if (tr.accepted_steps + tr.rejected_steps >= cfg_.max_steps) {
        return finish(Termination::SolverError, BlowupKind::None, "step budget exhausted");
      }
      const double target = next_record();
      const double remaining = std::abs(target - y.t);
      const bool hits_target = h >= remaining * (1.0 - 1e-12);
      const double trial = hits_target ? remaining : h;

      ModelState coarse;
      ModelState fine;
      try {
        coarse = step_rk4(y, dir * trial, p_);
        fine = step_rk4(step_rk4(y, dir * trial / 2, p_), dir * trial / 2, p_);
      } catch (const DegenerateDepth& e) {
        return finish(Termination::SolverError, BlowupKind::None, std::string("degenerate depth: ") + e.what());
      } catch (const NoConvergence& e) {
        return finish(Termination::SolverError, BlowupKind::None, std::string("no convergence: ") + e.what());
      } catch (const SymmetryError& e) {
        return finish(Termination::SolverError, BlowupKind::None, std::string("symmetry: ") + e.what());
      }
      const double err = step_error(coarse, fine);
      if (!std::isfinite(err) || err > cfg_.rel_tol) {
        ++tr.rejected_steps;
        h = trial / 2;
        if (h < cfg_.dt_min) {
          return finish(Termination::BlowupDetected, BlowupKind::DtUnderflow,
                        "step size " + std::to_string(h) + " fell below dt_min " + std::to_string(cfg_.dt_min));
        }
        continue;
      }

      ++tr.accepted_steps;
      y = std::move(fine);
      recorded_last = false;
      if (hits_target) {
        y.t = target;
        if (cfg_.symmetry_projection) project(y);
        record(y);
        recorded_last = true;
        ++record_index;
      }
      if (trial == h && err < cfg_.rel_tol / 32) h = std::min(2 * h, cfg_.dt);

      const double norm = x_tau_norm(y.h, 0.0) + x_tau_norm(y.u, 0.0);
      if (!(norm <= cfg_.blowup_norm_threshold)) {
        return finish(Termination::BlowupDetected, BlowupKind::NormThreshold,
                      "norm " + std::to_string(norm) + " exceeded " + std::to_string(cfg_.blowup_norm_threshold));
      }
      if (cfg_.analyticity_detector) {
        const double tau_crit = 3.0 * 2.0 * std::numbers::pi / y.grid_size();
        for (const SpectralField* f : {&y.h, &y.u}) {
          const AnalyticityFit fit = analyticity_fit(*f, cfg_.analyticity_floor);
          if (!fit.degenerate && fit.tau < tau_crit) {
            return finish(Termination::BlowupDetected, BlowupKind::AnalyticityCollapse,
                          "fitted strip width " + std::to_string(fit.tau) + " below " + std::to_string(tau_crit));
          }
        }
      }
    }
    return finish(Termination::Completed, BlowupKind::None, "");
  }

 private:
  const ModelParams& p_;
  const IntegratorConfig& cfg_;
};

}  // namespace

Trajectory integrate(const ModelState& s0, const ModelParams& p, const IntegratorConfig& cfg) {
  cfg.validate();
  p.validate();
  return Marcher(p, cfg).run(s0, nullptr, nullptr);
}

IntegrationResult integrate(const ModelState& s0, const ModelParams& p, const IntegratorConfig& cfg,
                            const DiagnosticsConfig& diag) {
  cfg.validate();
  p.validate();
  IntegrationResult out;
  out.trajectory = Marcher(p, cfg).run(s0, &diag, &out.diagnostics);
  return out;
}

}  // namespace swblow
