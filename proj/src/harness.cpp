#include "swblow/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "swblow/errors.hpp"
#include "swblow/format.hpp"
#include "swblow/scenarios.hpp"

namespace swblow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_row(std::initializer_list<double> values) {
  std::string out;
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
  return out;
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  out += '\n';
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

int exit_code_for(Termination t) {
  switch (t) {
    case Termination::Completed: return kExitCompleted;
    case Termination::BlowupDetected: return kExitBlowup;
    case Termination::SolverError: return kExitSolverError;
  }
  return kExitSolverError;
}

ModelState build_initial_state(const RunConfig& cfg) {
  const int n = cfg.n;
  validate_grid_size(n);
  const InitialConfig& ic = cfg.initial;
  switch (ic.kind) {
    case InitialKind::Rest:
      return ModelState{SpectralField::constant(n, 1.0), SpectralField(n), 0.0};
    case InitialKind::Wave: {
      SpectralField h = SpectralField::constant(n, 1.0);
      h.set_mode(ic.mode, 0.5 * ic.amplitude);
      SpectralField u(n);
      u.set_mode(ic.mode, Complex(0.0, -0.5 * ic.velocity));
      return ModelState{h, u, 0.0};
    }
    case InitialKind::Random: {
      // Even h and odd u with geometrically decaying random modes.
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      SpectralField h = SpectralField::constant(n, 1.0);
      SpectralField u(n);
      const int top = std::min(8, n / 2 - 1);
      for (int k = 1; k <= top; ++k) {
        const double scale = ic.random_scale * std::exp(-0.5 * (k - 1));
        h.set_mode(k, scale * dist(rng));
        u.set_mode(k, Complex(0.0, scale * dist(rng)));
      }
      return ModelState{h, u, 0.0};
    }
    case InitialKind::DrySpot:
      return make_dry_spot_data(ic.steepness, n).state;
    case InitialKind::SignChange:
      return make_sign_change_data(ic.sigma, cfg.model.a, n).state;
    case InitialKind::Theorem3:
      return make_theorem3_data(ic.beta, ic.gamma, n);
  }
  throw ConfigError("unhandled initial.kind");
}

// ---------------------------------------------------------------------------

namespace {

std::vector<int> usable_modes(const RunConfig& cfg) {
  std::vector<int> out;
  for (int m : cfg.output_modes) {
    if (m <= cfg.n / 2 - 1) out.push_back(m);
  }
  return out;
}

std::string render_state_series(const RunConfig& cfg, const Trajectory& tr) {
  const auto modes = usable_modes(cfg);
  std::string out = "t,h_min,h_max,u_min,u_max,mean_h,mean_u";
  for (int m : modes) out += ",abs_h_k" + std::to_string(m) + ",abs_u_k" + std::to_string(m);
  out += '\n';
  for (const auto& s : tr.states) {
    const GridField h = transform_inverse(s.h);
    const GridField u = transform_inverse(s.u);
    std::vector<double> row{s.t, h.min(), h.max(), u.min(), u.max(), s.h.mean(), s.u.mean()};
    for (int m : modes) {
      row.push_back(std::abs(s.h[m]));
      row.push_back(std::abs(s.u[m]));
    }
    out += csv_row(row);
  }
  return out;
}

std::string render_jets(const std::vector<DiagnosticsSample>& samples) {
  std::string out = "t,alpha0,alpha1,alpha2,alpha3,beta0,beta1,beta2,beta3\n";
  for (const auto& d : samples) {
    if (!d.jet) continue;
    const auto& j = *d.jet;
    out += csv_row({d.t, j.alpha[0], j.alpha[1], j.alpha[2], j.alpha[3], j.beta[0], j.beta[1], j.beta[2], j.beta[3]});
  }
  return out;
}

std::string render_energies(const std::vector<DiagnosticsSample>& samples) {
  std::string out = "t,nu,energy,tau_h,tau_u,hamiltonian\n";
  for (const auto& d : samples) {
    out += csv_row({d.t, d.energy ? d.energy->nu : kNaN, d.energy ? d.energy->energy : kNaN,
                    d.fit_h && !d.fit_h->degenerate ? d.fit_h->tau : kNaN,
                    d.fit_u && !d.fit_u->degenerate ? d.fit_u->tau : kNaN, d.hamiltonian.value_or(kNaN)});
  }
  return out;
}

std::string render_functionals(const std::vector<DiagnosticsSample>& samples) {
  std::string out = "t,omega,sigma,F_h,F_u,h1,h2,h3,h4,h5,h_rate_lb,u_rate_lb\n";
  for (const auto& d : samples) {
    if (!d.functionals) {
      out += csv_row({d.t, kNaN, kNaN, kNaN, kNaN, 0, 0, 0, 0, 0, kNaN, kNaN});
      continue;
    }
    const auto& f = *d.functionals;
    std::vector<double> row{d.t, f.omega, f.sigma, f.F_h, f.F_u};
    for (bool b : f.hypotheses_ok) row.push_back(b ? 1.0 : 0.0);
    row.push_back(d.bounds ? d.bounds->h_rate_lb : kNaN);
    row.push_back(d.bounds ? d.bounds->u_rate_lb : kNaN);
    out += csv_row(row);
  }
  return out;
}

std::string render_slices(const std::vector<InequalitySlice>& slices) {
  std::string out =
      "t,omega,sigma,F_h,F_u,h1,h2,h3,h4,h5,rate_h_rhs,rate_u_rhs,rate_h_fd,rate_u_fd,h_rate_lb,u_rate_lb,verified\n";
  for (const auto& sl : slices) {
    std::vector<double> row{sl.t, sl.geometry.omega, sl.geometry.sigma, sl.functionals.F_h, sl.functionals.F_u};
    for (bool b : sl.functionals.hypotheses_ok) row.push_back(b ? 1.0 : 0.0);
    row.insert(row.end(), {sl.rate_h_rhs, sl.rate_u_rhs, sl.rate_h_fd.value_or(kNaN), sl.rate_u_fd.value_or(kNaN),
                           sl.bounds ? sl.bounds->h_rate_lb : kNaN, sl.bounds ? sl.bounds->u_rate_lb : kNaN,
                           sl.verified ? 1.0 : 0.0});
    out += csv_row(row);
  }
  return out;
}

}  // namespace

SimulationOutput simulate(const RunConfig& cfg) {
  cfg.validate();
  const ModelState s0 = build_initial_state(cfg);
  SimulationOutput out;
  out.result = integrate(s0, cfg.model, cfg.integrator, cfg.diagnostics);
  const auto& diag = out.result.diagnostics;
  out.files["state_series.csv"] = render_state_series(cfg, out.result.trajectory);
  if (cfg.diagnostics.jets) out.files["jets.csv"] = render_jets(diag);
  if (cfg.diagnostics.energies || cfg.diagnostics.analyticity || cfg.diagnostics.hamiltonian) {
    out.files["energies.csv"] = render_energies(diag);
  }
  if (cfg.diagnostics.functionals) out.files["functionals.csv"] = render_functionals(diag);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class RunWriter {
 public:
  RunWriter(const RunConfig& cfg, std::string command)
      : cfg_(cfg), command_(std::move(command)), started_(utc_now()) {}

  void add(const std::string& name, std::string body) { files_[name] = std::move(body); }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  RunOutcome finish(int exit_code, std::string status, std::string message) {
    RunOutcome out;
    out.exit_code = exit_code;
    out.status = std::move(status);
    out.message = std::move(message);
    std::error_code ec;
    const std::filesystem::path dir(cfg_.output_dir);
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      out.message += (out.message.empty() ? "" : "; ") + std::string("cannot create output directory: ") + ec.message();
      return out;
    }
    std::ostringstream manifest;
    manifest << "[manifest]\n";
    manifest << "artifact.version = " << kArtifactVersion << "\n";
    manifest << "run.command = " << command_ << "\n";
    manifest << "run.started = " << started_ << "\n";
    manifest << "run.finished = " << utc_now() << "\n";
    manifest << "run.status = " << out.status << "\n";
    manifest << "run.exit_code = " << out.exit_code << "\n";
    manifest << "run.message = " << out.message << "\n";
    for (std::size_t i = 0; i < notes_.size(); ++i) manifest << "run.note" << i << " = " << notes_[i] << "\n";
    manifest << "\n[config]\n" << serialize_key_values(cfg_.to_key_values());
    manifest << "\n[checksums]\n";
    for (const auto& [name, body] : files_) {
      const auto path = dir / name;
      std::ofstream f(path, std::ios::binary);
      f << body;
      if (!f) {
        out.message += "; failed to write " + path.string();
        continue;
      }
      out.files.push_back(path.string());
      manifest << name << " = sha256:" << sha256_hex(body) << "\n";
    }
    const auto mpath = dir / "manifest.txt";
    std::ofstream m(mpath, std::ios::binary);
    m << manifest.str();
    out.files.push_back(mpath.string());
    return out;
  }

 private:
  const RunConfig& cfg_;
  std::string command_;
  std::string started_;
  std::map<std::string, std::string> files_;
  std::vector<std::string> notes_;
};

// Runs body, mapping library errors onto exit codes.
template <class Body>
RunOutcome guarded(const RunConfig& cfg, const std::string& command, Body&& body) {
  RunWriter w(cfg, command);
  try {
    return body(w);
  } catch (const ConfigError& e) {
    return w.finish(kExitConfigError, "config_error", e.what());
  } catch (const DomainError& e) {
    return w.finish(kExitConfigError, "config_error", e.what());
  } catch (const Error& e) {
    return w.finish(kExitSolverError, "solver_error", e.what());
  } catch (const std::exception& e) {
    return w.finish(kExitSolverError, "solver_error", e.what());
  }
}

}  // namespace

RunOutcome run_simulate(const RunConfig& cfg) {
  return guarded(cfg, "simulate", [&](RunWriter& w) {
    for (const auto& warning : cfg.model.warnings()) w.note(warning);
    SimulationOutput out = simulate(cfg);
    for (auto& [name, body] : out.files) w.add(name, std::move(body));
    const auto& term = out.result.trajectory.termination;
    return w.finish(exit_code_for(term.status), std::string(to_string(term.status)),
                    term.status == Termination::BlowupDetected
                        ? std::string(to_string(term.blowup)) + ": " + term.reason
                        : term.reason);
  });
}

RunOutcome run_reduce(const RunConfig& cfg) {
  return guarded(cfg, "reduce", [&](RunWriter& w) {
    cfg.validate();
    const JetState j0{cfg.reduce.alpha2, cfg.reduce.beta1, 0.0, cfg.reduce.system};
    const JetRun run = integrate_jet(j0, cfg.reduce.dt, cfg.reduce.t_end);
    const double pole = riccati_upper_time(j0.beta1);
    std::string body = "t,alpha2,beta1,invariant,comparison\n";
    for (const auto& j : run.series) {
      const double cmp = j.t < pole ? j0.beta1 / (1.0 + j.t * j0.beta1) : kNaN;
      body += csv_row({j.t, j.alpha2, j.beta1, simplified_invariant(j), cmp});
    }
    w.add("jet_reduction.csv", std::move(body));
    w.note("riccati_upper_time = " + format_number(pole));
    w.note("blowup_time = " + format_number(run.blowup_time.value_or(kNaN)));
    return run.blew_up ? w.finish(kExitBlowup, "blowup", "beta1 exceeded the blow-up threshold")
                       : w.finish(kExitCompleted, "completed", "");
  });
}

RunOutcome run_scenario(const RunConfig& cfg) {
  return guarded(cfg, "scenario", [&](RunWriter& w) {
    cfg.validate();
    switch (cfg.scenario.kind) {
      case ScenarioKind::Theorem2: {
        const ModelState s0 = make_sign_change_data(cfg.initial.sigma, cfg.model.a, cfg.n).state;
        Theorem2Options opt;
        opt.sigma = cfg.initial.sigma;
        opt.dt = cfg.integrator.dt;
        opt.max_halvings = cfg.scenario.max_halvings;
        opt.symmetry_projection = cfg.integrator.symmetry_projection;
        Theorem2Result res = run_theorem2_construction(s0, cfg.model, cfg.scenario.delta, opt);
        DiagnosticsConfig dcfg;
        dcfg.energies = dcfg.analyticity = dcfg.hamiltonian = false;
        std::vector<DiagnosticsSample> samples;
        for (const auto& s : res.forward.states) samples.push_back(sample_diagnostics(s, cfg.model, dcfg, std::nullopt));
        w.add("jets.csv", render_jets(samples));
        w.add("state_series.csv", render_state_series(cfg, res.forward));
        res.report.files = {"jets.csv", "state_series.csv"};
        w.add("report.txt", res.report.to_text());
        const auto& term = res.forward.termination;
        return w.finish(exit_code_for(term.status), std::string(to_string(term.status)), term.reason);
      }
      case ScenarioKind::Theorem3: {
        const ModelState s0 = make_theorem3_data(cfg.initial.beta, cfg.initial.gamma, cfg.n);
        Theorem3Options opt;
        opt.dt = cfg.integrator.dt;
        opt.record_every = cfg.integrator.record_every;
        opt.lambda = cfg.diagnostics.lambda;
        opt.cells = cfg.diagnostics.quadrature_cells;
        opt.symmetry_projection = cfg.integrator.symmetry_projection;
        Theorem3Result res = run_theorem3_monitor(s0, cfg.model, cfg.scenario.horizon, opt);
        w.note("zero-mean eta validation disabled for this experiment");
        w.add("functionals.csv", render_slices(res.slices));
        w.add("state_series.csv", render_state_series(cfg, res.trajectory));
        res.report.files = {"functionals.csv", "state_series.csv"};
        w.add("report.txt", res.report.to_text());
        const auto& term = res.trajectory.termination;
        return w.finish(exit_code_for(term.status), std::string(to_string(term.status)), term.reason);
      }
      case ScenarioKind::DrySpot: {
        DrySpotOptions opt;
        opt.system = cfg.reduce.system;
        opt.t_end = cfg.reduce.t_end;
        opt.dt = cfg.reduce.dt;
        const ScenarioReport rep = run_dry_spot_reduction(cfg.initial.steepness, cfg.n, opt);
        w.add("report.txt", rep.to_text());
        return rep.outcome("blew_up").value_or(0.0) > 0.0
                   ? w.finish(kExitBlowup, "blowup", "jet reduction reached the blow-up threshold")
                   : w.finish(kExitCompleted, "completed", "");
      }
    }
    return w.finish(kExitConfigError, "config_error", "unhandled scenario");
  });
}

// ---------------------------------------------------------------------------

std::vector<RunConfig> sweep_grid(const RunConfig& cfg) {
  std::vector<RunConfig> grid{cfg};
  auto expand = [&grid](const auto& values, auto assign) {
    if (values.empty()) return;
    std::vector<RunConfig> next;
    next.reserve(grid.size() * values.size());
    for (const auto& base : grid) {
      for (const auto& v : values) {
        RunConfig c = base;
        assign(c, v);
        next.push_back(std::move(c));
      }
    }
    grid = std::move(next);
  };
  const SweepConfig& s = cfg.sweep;
  expand(s.a, [](RunConfig& c, double v) { c.model.a = v; });
  expand(s.b, [](RunConfig& c, double v) { c.model.b = v; });
  expand(s.c, [](RunConfig& c, double v) { c.model.c = v; });
  expand(s.d, [](RunConfig& c, double v) { c.model.d = v; });
  expand(s.steepness, [](RunConfig& c, double v) { c.initial.steepness = v; });
  expand(s.n, [](RunConfig& c, int v) { c.n = v; });
  expand(s.alpha2, [](RunConfig& c, double v) { c.reduce.alpha2 = v; });
  expand(s.beta1, [](RunConfig& c, double v) { c.reduce.beta1 = v; });
  return grid;
}

namespace {

SweepRow run_row(std::size_t index, const RunConfig& c, SweepMode mode) {
  SweepRow row;
  row.index = index;
  row.config = c;
  row.t_norm = row.t_tau = row.t_dt = row.t_final = row.riccati_upper = row.jet_blowup = kNaN;
  row.blowup_kind = "none";
  try {
    c.validate();
    if (mode == SweepMode::Reduce) {
      const JetState j0{c.reduce.alpha2, c.reduce.beta1, 0.0, c.reduce.system};
      const JetRun run = integrate_jet(j0, c.reduce.dt, c.reduce.t_end);
      row.status = run.blew_up ? "blowup" : "completed";
      row.blowup_kind = run.blew_up ? "jet_threshold" : "none";
      row.t_final = run.series.back().t;
      row.riccati_upper = riccati_upper_time(j0.beta1);
      row.jet_blowup = run.blowup_time.value_or(kNaN);
      return row;
    }
    const ModelState s0 = build_initial_state(c);
    if (c.initial.kind == InitialKind::DrySpot) row.riccati_upper = riccati_upper_time(jet_from_state(s0).beta[1]);
    const Trajectory tr = integrate(s0, c.model, c.integrator);
    const auto& term = tr.termination;
    row.status = std::string(to_string(term.status));
    row.blowup_kind = std::string(to_string(term.blowup));
    row.t_final = term.t;
    row.message = term.reason;
    switch (term.blowup) {
      case BlowupKind::NormThreshold: row.t_norm = term.t; break;
      case BlowupKind::AnalyticityCollapse: row.t_tau = term.t; break;
      case BlowupKind::DtUnderflow: row.t_dt = term.t; break;
      case BlowupKind::None: break;
    }
  } catch (const ConfigError& e) {
    row.status = "config_error";
    row.message = e.what();
  } catch (const DomainError& e) {
    row.status = "config_error";
    row.message = e.what();
  } catch (const std::exception& e) {
    row.status = "solver_error";
    row.message = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep_rows(const RunConfig& cfg, int workers) {
  const std::vector<RunConfig> grid = sweep_grid(cfg);
  std::vector<SweepRow> rows(grid.size());
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) rows[i] = run_row(i, grid[i], cfg.sweep.mode);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

std::string render_sweep_table(const std::vector<SweepRow>& rows) {
  std::string out =
      "index,variant,a,b,c,d,steepness,n,alpha2,beta1,status,blowup_kind,t_norm,t_tau,t_dt,t_final,riccati_upper,"
      "jet_blowup\n";
  for (const auto& r : rows) {
    const RunConfig& c = r.config;
    out += std::to_string(r.index) + "," + std::string(to_string(c.model.variant)) + ",";
    out += format_number(c.model.a) + "," + format_number(c.model.b) + "," + format_number(c.model.c) + "," +
           format_number(c.model.d) + "," + format_number(c.initial.steepness) + "," + std::to_string(c.n) + "," +
           format_number(c.reduce.alpha2) + "," + format_number(c.reduce.beta1) + ",";
    out += r.status + "," + r.blowup_kind + ",";
    out += csv_row({r.t_norm, r.t_tau, r.t_dt, r.t_final, r.riccati_upper, r.jet_blowup});
  }
  return out;
}

RunOutcome run_sweep(const RunConfig& cfg) {
  return guarded(cfg, "sweep", [&](RunWriter& w) {
    cfg.validate();
    const auto rows = run_sweep_rows(cfg, cfg.sweep.workers);
    w.add("sweep_table.csv", render_sweep_table(rows));
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status == "config_error" || r.status == "solver_error";
    if (failed) w.note(std::to_string(failed) + " of " + std::to_string(rows.size()) + " runs failed");
    return w.finish(kExitCompleted, "completed", std::to_string(rows.size()) + " runs");
  });
}

}  // namespace swblow
