// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "swblow/diagnostics.hpp"
#include "swblow/harness.hpp"
#include "swblow/reduction.hpp"
#include "swblow/scenarios.hpp"
#include "swblow/singular_quadrature.hpp"
#include "swblow/timestepping.hpp"

using namespace swblow;
using testutil::field;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ModelParams abcd(double a, double b, double c, double d) {
  ModelParams p;
  p.variant = ModelVariant::ABCD;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  return p;
}

double coeff_diff(const ModelState& a, const ModelState& b) {
  return std::max(testutil::max_coeff_diff(a.h, b.h), testutil::max_coeff_diff(a.u, b.u));
}

// ---------------------------------------------------------------------------

Verdict riccati_reproduction() {
  const JetRun run = integrate_jet({0.0, -1.0, 0.0, JetSystem::Full}, 1e-3, 2.0);
  double worst = 0.0;
  int points = 0;
  for (const auto& j : run.series) {
    if (j.t > 0.99) break;
    const double exact = -1.0 / (1.0 - j.t);
    worst = std::max(worst, std::abs(j.beta1 - exact) / std::abs(exact));
    ++points;
  }
  const double t_star = run.blowup_time.value_or(kNaN);
  const bool ok = run.blew_up && worst <= 1e-8 && points > 10 && t_star >= 0.995 && t_star <= 1.005;
  return {ok, "max rel err " + sci(worst) + " on " + std::to_string(points) + " steps, t* = " + sci(t_star)};
}

Verdict comparison_bound() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua(0.0, 5.0);
  std::uniform_real_distribution<double> ub(-3.0, -0.1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const JetState j0{ua(rng), ub(rng), 0.0, JetSystem::Full};
    const double pole = riccati_upper_time(j0.beta1);
    const JetRun run = integrate_jet(j0, 1e-3, pole);
    for (const auto& j : run.series) {
      if (j.t >= pole) break;
      worst = std::max(worst, j.beta1 - j0.beta1 / (1.0 + j.t * j0.beta1));
    }
  }
  return {worst <= 1e-8, "max excess over bound " + sci(worst) + " across 100 starts"};
}

Verdict simplified_conservation() {
  // Starts chosen so that no trajectory reaches its pole within unit time.
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> ua(0.0, 0.5);
  std::uniform_real_distribution<double> ub(-0.25, 0.5);
  double worst = 0.0;
  bool finished = true;
  for (int trial = 0; trial < 20; ++trial) {
    const JetState j0{ua(rng), ub(rng), 0.0, JetSystem::Simplified};
    const JetRun run = integrate_jet(j0, 1e-3, 1.0);
    finished = finished && !run.blew_up && run.series.back().t == 1.0;
    for (const auto& j : run.series) worst = std::max(worst, std::abs(simplified_invariant(j) - simplified_invariant(j0)));
  }
  return {finished && worst <= 1e-10, "max invariant drift " + sci(worst) + " over 20 starts"};
}

Verdict spectral_correctness() {
  std::mt19937_64 rng(2026);
  double worst_d = 0.0, worst_m = 0.0, worst_rt = 0.0;
  for (int n : {8, 16, 32}) {
    const int kmax = n / 2 - 1;
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = testutil::random_field(n, rng, kmax, 1.0, 0.0, 0.3);
      const auto g = testutil::random_field(n, rng, kmax, 1.0, 0.0, -0.2);
      // Differentiation oracle: direct DFT of the analytically differentiated samples.
      for (int order = 1; order <= 4; ++order) {
        std::vector<double> samples(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
          const double x = GridField::node(j, n);
          double s = 0.0;
          for (int k = 1; k <= kmax; ++k) {
            const Complex ck = f[k];
            const Complex mult = std::pow(Complex(0.0, k), order);
            s += 2.0 * (ck * mult * std::polar(1.0, k * x)).real();
          }
          samples[static_cast<std::size_t>(j)] = s;
        }
        const auto ref = testutil::direct_dft(samples);
        const auto d = derivative(f, order);
        for (int k = -kmax; k <= kmax; ++k) {
          worst_d = std::max(worst_d, std::abs(d[k] - ref[static_cast<std::size_t>(k + kmax)]) /
                                          std::max(1.0, std::pow(kmax, order)));
        }
      }
      // Product oracle: truncated brute-force convolution.
      const auto p = multiply(f, g);
      for (int k = -kmax; k <= kmax; ++k) {
        Complex s = 0.0;
        for (int m = -kmax; m <= kmax; ++m) s += f[k - m] * g[m];
        worst_m = std::max(worst_m, std::abs(p[k] - s));
      }
      worst_rt = std::max(worst_rt, testutil::max_coeff_diff(transform_forward(transform_inverse(f)), f));
    }
  }
  const bool ok = worst_d <= 1e-12 && worst_m <= 1e-12 && worst_rt <= 1e-12;
  return {ok, "derivative " + sci(worst_d) + " (scaled by K^order), multiply " + sci(worst_m) + ", round trip " +
                  sci(worst_rt)};
}

Verdict sgn_inversion() {
  std::mt19937_64 rng(2027);
  ModelParams p;
  p.variant = ModelVariant::SGN;
  double worst_oracle = 0.0, worst_forward = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    SpectralField h;
    do {
      h = testutil::random_field(256, rng, 6, 0.45, 0.4, 1.0);
    } while (min_depth(h) < 0.1);
    const auto f = testutil::random_field(256, rng, 6, 1.0, 0.4, 0.2);
    const auto w = invert_sgn_operator(h, f, p);
    const auto ref = oracle::sgn_fd_richardson(h, f, p.mu, 4096);
    const int m = static_cast<int>(ref.size());
    for (int j = 0; j < m; ++j) {
      worst_oracle =
          std::max(worst_oracle, std::abs(evaluate_at(w, GridField::node(j, m)) - ref[static_cast<std::size_t>(j)]));
    }
    worst_forward = std::max(worst_forward, testutil::max_coeff_diff(apply_sgn_operator(h, w, p), f));
  }
  return {worst_oracle <= 1e-6 && worst_forward <= 1e-10,
          "vs finite-difference oracle " + sci(worst_oracle) + ", forward residual " + sci(worst_forward)};
}

Verdict conservation_suite() {
  const int n = 128;
  const ModelState s0{field(n, [](double x) { return 1 + 0.1 * std::cos(x) + 0.03 * std::cos(2 * x); }),
                      field(n, [](double x) { return 0.1 * std::sin(x) - 0.02 * std::sin(3 * x); }), 0.0};
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.record_every = 50;
  double mean_drift = 0.0, parity = 0.0, ham = 0.0;
  bool completed = true;
  ModelParams nsw, sgn;
  sgn.variant = ModelVariant::SGN;
  const ModelParams hamiltonian_params = abcd(-1.0 / 30, 0.2, -1.0 / 30, 0.2);
  for (const ModelParams& p : {nsw, sgn, hamiltonian_params}) {
    const Trajectory tr = integrate(s0, p, cfg);
    completed = completed && tr.termination.status == Termination::Completed &&
                tr.states.back().t == cfg.t_end;
    const double h0 = p.variant == ModelVariant::ABCD ? hamiltonian(s0, p) : 0.0;
    for (const auto& s : tr.states) {
      mean_drift = std::max({mean_drift, std::abs(s.h.mean() - 1.0 - (s0.h.mean() - 1.0)), std::abs(s.u.mean())});
      parity = std::max({parity, testutil::even_residual(s.h), testutil::odd_residual(s.u)});
      if (p.variant == ModelVariant::ABCD) ham = std::max(ham, std::abs(hamiltonian(s, p) - h0) / std::abs(h0));
    }
  }
  return {completed && mean_drift <= 1e-10 && parity <= 1e-9 && ham <= 1e-8,
          "mean drift " + sci(mean_drift) + ", parity " + sci(parity) + ", Hamiltonian rel drift " + sci(ham)};
}

Verdict sign_change_construction() {
  const ModelParams p = abcd(-1, 0, 0, 1);
  const ModelState s0 = make_sign_change_data(0.1, -1.0, 64).state;
  const Theorem2Result r = run_theorem2_construction(s0, p, 0.1);
  const double hbar = r.report.outcome("hbar0_origin").value_or(kNaN);
  const double hend = r.report.outcome("h_end_origin").value_or(kNaN);
  const double rel = std::abs(r.slope_measured - r.slope_predicted) / std::abs(r.slope_predicted);
  return {hbar > 0.0 && hend < 0.0 && rel <= 1e-6,
          "delta " + sci(r.delta) + ", hbar0(0) " + sci(hbar) + ", h(2 delta, 0) " + sci(hend) +
              ", slope rel err " + sci(rel)};
}

template <class F>
double adaptive_weighted(F&& f, double lambda, double omega) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([&](double x) { return f(x) * std::pow(x, -lambda); }, 0.0, omega, 1e-14);
}

Verdict functional_inequalities() {
  const ModelParams p = abcd(-0.1, 0, -0.1, 0);
  // Static synthetic fields.
  int static_held = 0, static_ok = 0;
  for (double beta : {0.2, 0.5, 0.8}) {
    for (double gamma : {0.3, 0.6, 1.0}) {
      const std::vector<ModelState> one{make_theorem3_data(beta, gamma, 64)};
      for (const auto& sl : check_functional_inequalities(one, p, 0.25, 1e-6)) {
        if (!sl.hypotheses_ok) continue;
        ++static_held;
        static_ok += sl.verified;
      }
    }
  }
  // Along a run: every slice with all hypotheses must satisfy both bounds
  // with the finite-difference rates.
  const Theorem3Result run = run_theorem3_monitor(make_theorem3_data(0.5, 0.5, 64), p, 0.25);
  int held = 0, ok = 0, fd = 0;
  for (const auto& sl : run.slices) {
    if (!sl.hypotheses_ok) continue;
    ++held;
    ok += sl.verified;
    fd += sl.rate_h_fd.has_value();
  }
  // Quadrature against closed forms and an adaptive rule.
  double closed = 0.0;
  for (double omega : {0.5, 1.0, pi / 2, pi}) {
    const SingularQuadrature q(0.25, omega);
    auto nodes = q.nodes();
    const std::vector<double> ones(nodes.size(), 1.0);
    closed = std::max(closed, std::abs(q.integrate(ones) - std::pow(omega, 0.75) / 0.75));
    closed = std::max(closed, std::abs(q.integrate(nodes) - std::pow(omega, 1.75) / 1.75));
  }
  const SingularQuadrature q(0.25, pi / 2);
  auto hv = q.nodes();
  for (auto& x : hv) x = -1 - std::cos(x);
  const double adaptive =
      std::abs(q.integrate(hv) - adaptive_weighted([](double x) { return -1 - std::cos(x); }, 0.25, pi / 2));
  const bool pass = static_held > 0 && static_ok == static_held && held > 0 && ok == held && fd > 0 &&
                    closed <= 1e-12 && adaptive <= 1e-9;
  return {pass, "static " + std::to_string(static_ok) + "/" + std::to_string(static_held) + ", run " +
                    std::to_string(ok) + "/" + std::to_string(held) + " slices (" + std::to_string(fd) +
                    " with finite differences), closed forms " + sci(closed) + ", adaptive " + sci(adaptive)};
}

Verdict strip_machinery() {
  const double k1 = shrink_rate(abcd(-1, 1.0 / 3, -1, 1.0 / 3), 0.0);
  const double k2 = shrink_rate(abcd(-1, 0, 0, 1), 0.0);
  const ModelParams p = abcd(-1, 1.0 / 3, -1, 1.0 / 3);
  const ModelState s0{field(64, [](double x) { return 1 + 0.3 * std::cos(x); }),
                      field(64, [](double x) { return 0.5 * std::sin(x); }), 0.0};
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  DiagnosticsConfig dcfg;
  dcfg.analyticity = dcfg.hamiltonian = dcfg.jets = false;
  const IntegrationResult r = integrate(s0, p, cfg, dcfg);
  std::optional<double> first_violation;
  double last_valid = 0.0;
  const double e0 = r.diagnostics.front().energy->energy;
  for (const auto& d : r.diagnostics) {
    if (!d.energy) break;
    last_valid = d.t;
    if (!first_violation && d.energy->energy >= 2 * e0) first_violation = d.t;
  }
  const double window = first_violation.value_or(last_valid);
  const bool pass = k1 == 4.0 && k2 == 3.0 && window > 0.0;
  return {pass, "k = " + sci(k1) + " and " + sci(k2) + "; E(t) >= 2 E(0) first at " +
                    (first_violation ? sci(*first_violation) : std::string("never")) +
                    ", strip valid until t = " + sci(last_valid) + ", window " + sci(window)};
}

Verdict analyticity_fitter() {
  double worst = 0.0;
  for (double tau : {0.1, 0.7, 2.0}) {
    SpectralField f(64);
    for (int k = 1; k <= f.max_mode(); ++k) f.set_mode(k, std::exp(-tau * k));
    worst = std::max(worst, std::abs(analyticity_fit(f).tau - tau));
  }
  const auto g = field(128, [](double x) {
    double s = 0.0;
    for (int k = 1; k <= 60; ++k) s += std::pow(2.0, -k) * std::cos(k * x);
    return s;
  });
  const double ln2 = std::abs(analyticity_fit(g).tau - std::log(2.0));
  return {worst <= 1e-6 && ln2 <= 1e-3, "geometric spectra " + sci(worst) + ", ln 2 field " + sci(ln2)};
}

Verdict criterion_cross_check() {
  std::mt19937_64 rng(2028);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_b = 0.0, worst_kernel = 0.0;
  for (double b : {0.25, 1.0, 4.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> hc(6), us(6);
      for (std::size_t k = 0; k < 6; ++k) {
        hc[k] = u(rng) * std::exp(-0.5 * static_cast<double>(k));
        us[k] = k == 0 ? 0.0 : u(rng) * std::exp(-0.5 * static_cast<double>(k));
      }
      const double a = -0.2 - 0.3 * trial;
      auto h = field(64, [&](double x) {
        double s = 0.0;
        for (std::size_t k = 0; k < hc.size(); ++k) s += hc[k] * std::cos(static_cast<double>(k) * x);
        return s;
      });
      auto v = field(64, [&](double x) {
        double s = 0.0;
        for (std::size_t k = 0; k < us.size(); ++k) s += us[k] * std::sin(static_cast<double>(k) * x);
        return s;
      });
      const double ref = oracle::sign_change_fourier(hc, us, a, b);
      const double scale = std::max(std::abs(ref), 1e-300);
      worst_b = std::max(worst_b, std::abs(sign_change_criterion_b(h, v, a, b) - ref) / scale);
      worst_kernel = std::max(worst_kernel, std::abs(sign_change_criterion_kernel(h, v, a, b) - ref) / scale);
    }
  }
  return {worst_b <= 1e-8 && worst_kernel <= 1e-8,
          "calibration constant 1; Fourier form rel err " + sci(worst_b) + ", lattice-sum form " + sci(worst_kernel)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "swblow_acceptance_determinism";
  fs::remove_all(root);
  RunConfig cfg;
  cfg.n = 64;
  cfg.model = abcd(-1.0 / 30, 0.2, -1.0 / 30, 0.2);
  cfg.initial.kind = InitialKind::Random;
  cfg.integrator.t_end = 0.2;
  cfg.integrator.record_every = 20;
  cfg.diagnostics.functionals = true;
  int identical = 0, compared = 0;
  cfg.output_dir = (root / "a").string();
  run_simulate(cfg);
  cfg.output_dir = (root / "b").string();
  run_simulate(cfg);
  for (const char* f : {"state_series.csv", "jets.csv", "energies.csv", "functionals.csv"}) {
    ++compared;
    const std::string a = slurp(root / "a" / f);
    identical += !a.empty() && a == slurp(root / "b" / f);
  }
  cfg.sweep.a = {-0.1, -1.0 / 30};
  cfg.sweep.d = {0.2, 0.5};
  cfg.integrator.t_end = 0.1;
  cfg.sweep.workers = 1;
  cfg.output_dir = (root / "w1").string();
  run_sweep(cfg);
  cfg.sweep.workers = 4;
  cfg.output_dir = (root / "w4").string();
  run_sweep(cfg);
  ++compared;
  const std::string w1 = slurp(root / "w1" / "sweep_table.csv");
  identical += !w1.empty() && w1 == slurp(root / "w4" / "sweep_table.csv");
  fs::remove_all(root);
  return {identical == compared,
          std::to_string(identical) + "/" + std::to_string(compared) + " CSV bodies byte-identical"};
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; infinity when none is stated
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const double none = std::numeric_limits<double>::infinity();
  const std::vector<Criterion> criteria{
      {1, "Riccati blow-up reproduction", 1.0, riccati_reproduction},
      {2, "Comparison bound", 10.0, comparison_bound},
      {3, "Simplified-system conservation", none, simplified_conservation},
      {4, "Spectral correctness", none, spectral_correctness},
      {5, "SGN inversion", none, sgn_inversion},
      {6, "Conservation suite", 120.0, conservation_suite},
      {7, "Sign-change construction end to end", 60.0, sign_change_construction},
      {8, "Functional inequality verification", none, functional_inequalities},
      {9, "Strip-energy machinery", none, strip_machinery},
      {10, "Analyticity fitter", none, analyticity_fitter},
      {11, "Sign-change criterion cross-check", none, criterion_cross_check},
      {12, "Determinism", none, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = v.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
