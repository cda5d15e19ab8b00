#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "swblow/diagnostics.hpp"
#include "swblow/errors.hpp"
#include "test_util.hpp"

using namespace swblow;
using testutil::field;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams abcd(double a, double b, double c, double d) {
  ModelParams p;
  p.variant = ModelVariant::ABCD;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  return p;
}

TEST(AnalyticityFit, RecoversGeometricDecay) {
  for (double tau : {0.1, 0.7, 2.0}) {
    SpectralField f(64);
    for (int k = 1; k <= f.max_mode(); ++k) f.set_mode(k, std::exp(-tau * k));
    const AnalyticityFit fit = analyticity_fit(f);
    EXPECT_FALSE(fit.degenerate) << tau;
    EXPECT_NEAR(fit.tau, tau, 1e-6);
    EXPECT_LT(fit.residual, 1e-10);
  }
}

TEST(AnalyticityFit, HalvingCosineSeries) {
  const auto f = field(128, [](double x) {
    double s = 0.0;
    for (int k = 1; k <= 60; ++k) s += std::pow(2.0, -k) * std::cos(k * x);
    return s;
  });
  const AnalyticityFit fit = analyticity_fit(f);
  EXPECT_FALSE(fit.degenerate);
  EXPECT_NEAR(fit.tau, std::log(2.0), 1e-3);
}

TEST(AnalyticityFit, DegenerateCases) {
  const AnalyticityFit one = analyticity_fit(field(32, [](double x) { return std::cos(x); }));
  EXPECT_TRUE(one.degenerate);
  EXPECT_EQ(one.usable_modes, 1);
  EXPECT_TRUE(analyticity_fit(SpectralField::constant(32, 1.0)).degenerate);
  SpectralField growing(32);
  for (int k = 1; k <= 15; ++k) growing.set_mode(k, std::exp(0.1 * k) * 1e-3);
  EXPECT_EQ(analyticity_fit(growing).tau, 0.0);
  EXPECT_THROW(analyticity_fit(growing, 0.0), DomainError);
}

TEST(ShrinkRate, BothCases) {
  EXPECT_DOUBLE_EQ(shrink_rate(abcd(-1, 1.0 / 3, -1, 1.0 / 3), 0.0), 4.0);
  EXPECT_DOUBLE_EQ(shrink_rate(abcd(-1, 0, 0, 1), 0.0), 3.0);
  EXPECT_DOUBLE_EQ(shrink_rate(abcd(-1, 0, 0, 1), 0.5), 5.0);
  EXPECT_THROW(shrink_rate(abcd(-1, 0, 0, 0), 0.0), DomainError);
  EXPECT_THROW(shrink_rate(abcd(-1, 0, 0, 1), -1.0), DomainError);
  EXPECT_EQ(energy_case_for(abcd(-1, 1, -1, 1)), EnergyCase::Case1);
  EXPECT_EQ(energy_case_for(abcd(-1, 0, 0, 1)), EnergyCase::Case2);
  EXPECT_FALSE(energy_case_for(abcd(-1, 0, -1, 1)).has_value());
  ModelParams nsw;
  EXPECT_FALSE(energy_case_for(nsw).has_value());
}

TEST(EnergySample, Examples) {
  // Exact coefficients: sampled roundoff would be amplified by e^{nu |k|}.
  SpectralField cosx(32);
  cosx.set_mode(1, 0.5);
  const EnergySample e1 = energy_sample({cosx, SpectralField(32), 0.0}, 4.0, EnergyCase::Case1);
  EXPECT_NEAR(e1.energy, std::exp(0.9), 1e-14);
  EXPECT_DOUBLE_EQ(e1.nu, 0.9);
  const EnergySample e2 = energy_sample({SpectralField(32), cosx, 0.0}, 3.0, EnergyCase::Case2);
  EXPECT_NEAR(e2.energy, std::exp(0.9), 1e-14);
  EXPECT_THROW(energy_sample({cosx, cosx, 0.17}, 4.0, EnergyCase::Case1), StripExhausted);
  EXPECT_THROW(energy_sample({cosx, cosx, -0.17}, 4.0, EnergyCase::Case1), StripExhausted);
  const EnergySample e3 = energy_sample({cosx, cosx, 0.1}, 4.0, EnergyCase::Case1);
  EXPECT_NEAR(e3.nu, 0.5, 1e-15);
  EXPECT_NEAR(e3.energy, 2 * std::exp(0.5), 1e-14);
}

TEST(FunctionalBounds, Examples) {
  FunctionalSample fs;
  fs.lambda = 0.25;
  fs.sigma = 1.0;
  fs.omega = 1.0;
  fs.F_u = 2.0;
  fs.hypotheses_ok = {true, true, true, true, true};
  const RateBounds b = functional_rate_bounds(fs);
  EXPECT_DOUBLE_EQ(b.h_rate_lb, 0.5);
  EXPECT_DOUBLE_EQ(b.u_rate_lb, 0.5);
  fs.F_u = 0.0;
  const RateBounds z = functional_rate_bounds(fs);
  EXPECT_EQ(z.h_rate_lb, 0.0);
  EXPECT_EQ(z.u_rate_lb, 0.0);
  fs.hypotheses_ok[3] = false;
  try {
    functional_rate_bounds(fs);
    FAIL();
  } catch (const HypothesesViolated& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(RiccatiLowerBlowupTime, Examples) {
  EXPECT_DOUBLE_EQ(riccati_lower_blowup_time(2.0, 0.25, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(riccati_lower_blowup_time(1.0, 0.25, 1.0), 8.0);
  EXPECT_LT(riccati_lower_blowup_time(1e12, 0.25, 1.0), 1e-10);
  EXPECT_THROW(riccati_lower_blowup_time(0.0, 0.25, 1.0), DomainError);
}

TEST(SingularFunctionals, ClosedFormsAndDomain) {
  const auto p = abcd(-0.1, 0, -0.1, 0);
  const double lambda = 0.25, omega = 1.2;
  const ModelState s{SpectralField::constant(32, -1.0), SpectralField(32), 0.0};
  const FunctionalSample fs = singular_functionals(s, p, lambda, omega, 0.5);
  EXPECT_NEAR(fs.F_h, std::pow(omega, 1 - lambda) / (1 - lambda), 1e-12);
  EXPECT_EQ(fs.F_u, 0.0);
  EXPECT_TRUE(fs.all_hypotheses_ok());
  EXPECT_THROW(singular_functionals(s, p, 0.5, omega, 0.5), DomainError);
  EXPECT_THROW(singular_functionals(s, p, 0.0, omega, 0.5), DomainError);
  EXPECT_THROW(singular_functionals(s, p, lambda, 4.0, 0.5), DomainError);
  EXPECT_THROW(singular_functionals(s, p, lambda, omega, 0.0), DomainError);
  // h = -1 fails "h < -sigma" once sigma >= 1.
  EXPECT_FALSE(singular_functionals(s, p, lambda, omega, 1.5).hypotheses_ok[0]);
}

TEST(SingularFunctionals, LinearVelocityThroughSpectralField) {
  // u = -x on [0, omega] is not band-limited; use a high-resolution sawtooth
  // and a short interval well inside (-pi, pi) where its Fourier series is
  // accurate, then compare the closed form loosely.
  const int n = 4096;
  const auto u = field(n, [](double x) { return -x; });
  const ModelState s{SpectralField::constant(n, -1.0), u, 0.0};
  const double lambda = 0.25, omega = 1.0;
  const FunctionalSample fs = singular_functionals(s, abcd(0, 0, 0, 0), lambda, omega, 0.5, 4096);
  EXPECT_NEAR(fs.F_u, std::pow(omega, 2 - lambda) / (2 - lambda), 1e-3);
}

TEST(Hypotheses, MatchDenseScan) {
  std::mt19937_64 rng(53);
  const auto p = abcd(-0.1, 0, -0.1, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelState s{testutil::random_even(32, rng, 4, 0.3, -1.0), testutil::random_odd(32, rng, 4, 0.5), 0.0};
    const double omega = 0.5 + 0.4 * trial;
    const double sigma = 0.5;
    const HypothesisFlags flags = check_hypotheses(s, p, omega, sigma);
    std::vector<double> xs(4089);  // contains every coarse point
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = omega * static_cast<double>(j) / 4088.0;
    const auto h = evaluate_at(s.h, xs);
    const auto u = evaluate_at(s.u, xs);
    const auto hx = evaluate_at(derivative(s.h, 1), xs);
    const auto hxxx = evaluate_at(derivative(s.h, 3), xs);
    const auto uxx = evaluate_at(derivative(s.u, 2), xs);
    HypothesisFlags dense{true, true, true, true, true};
    for (std::size_t j = 0; j < xs.size(); ++j) {
      dense[0] = dense[0] && h[j] + sigma <= 1e-12;
      dense[1] = dense[1] && u[j] <= 1e-12;
      dense[2] = dense[2] && hx[j] >= -1e-12;
      dense[3] = dense[3] && p.c * hxxx[j] >= -1e-12;
      dense[4] = dense[4] && p.a * uxx[j] >= -1e-12;
    }
    // The coarse grid can only miss violations, never invent them.
    for (int i = 0; i < 5; ++i) {
      if (dense[static_cast<std::size_t>(i)]) EXPECT_TRUE(flags[static_cast<std::size_t>(i)]) << trial << " " << i;
    }
  }
}

TEST(MonitorGeometry, CurvatureConditionSetsOmega) {
  // h = -1 - 0.5 cos x, u = -(sin x - sin 2x / 4), a = c = -0.1: every
  // condition holds on [0, pi] except a u_xx >= 0, which needs cos x >= 1/2.
  const double beta = 0.5;
  const ModelState s{field(32, [&](double x) { return -1 - beta * std::cos(x); }),
                     field(32, [](double x) { return -(std::sin(x) - 0.25 * std::sin(2 * x)); }), 0.0};
  const MonitorGeometry g = monitor_geometry(s, abcd(-0.1, 0, -0.1, 0));
  ASSERT_TRUE(g.found);
  EXPECT_LE(g.omega, pi / 3 + 1e-12);
  EXPECT_GT(g.omega, pi / 3 - pi / 511);
  EXPECT_NEAR(g.sigma, 1 + beta * std::cos(g.omega), 1e-12);
  EXPECT_TRUE(singular_functionals(s, abcd(-0.1, 0, -0.1, 0), 0.25, g.omega, g.sigma).all_hypotheses_ok());
  const ModelState wet{SpectralField::constant(32, 1.0), SpectralField(32), 0.0};
  EXPECT_FALSE(monitor_geometry(wet, abcd(-0.1, 0, -0.1, 0)).found);
}

struct TrigData {
  std::vector<double> hc;  // h = sum hc[k] cos kx
  std::vector<double> us;  // u = sum us[k] sin kx
};

SpectralField from_cos(const std::vector<double>& hc) {
  return field(64, [&](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < hc.size(); ++k) s += hc[k] * std::cos(static_cast<double>(k) * x);
    return s;
  });
}

SpectralField from_sin(const std::vector<double>& us) {
  return field(64, [&](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < us.size(); ++k) s += us[k] * std::sin(static_cast<double>(k) * x);
    return s;
  });
}

TrigData random_trig(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigData d{std::vector<double>(6), std::vector<double>(6)};
  for (int k = 0; k < 6; ++k) {
    d.hc[static_cast<std::size_t>(k)] = u(rng) * std::exp(-0.5 * k);
    d.us[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : u(rng) * std::exp(-0.5 * k);
  }
  return d;
}

TEST(SignChangeCriterion, ClosedFormAndZeroVelocity) {
  const auto sinx = field(32, [](double x) { return std::sin(x); });
  // (1 - a) sin x differentiated and smoothed by 1/(1 + b): -(1 - a)/(1 + b).
  EXPECT_NEAR(sign_change_criterion_b(SpectralField::constant(32, 1.0), sinx, -1.0, 1.0), -1.0, 1e-14);
  EXPECT_NEAR(sign_change_criterion_b(SpectralField::constant(32, 1.0), sinx, -1.0, 3.0), -0.5, 1e-14);
  std::mt19937_64 rng(59);
  const auto h = testutil::random_field(32, rng, 8, 0.5, 0.4, 1.0);
  EXPECT_EQ(sign_change_criterion_b(h, SpectralField(32), -1.0, 1.0), 0.0);
  EXPECT_THROW(sign_change_criterion_b(h, sinx, -1.0, 0.0), DomainError);
  EXPECT_THROW(sign_change_criterion_kernel(h, sinx, -1.0, -1.0), DomainError);
}

TEST(SignChangeCriterion, MatchesIndependentFourierOracle) {
  std::mt19937_64 rng(61);
  for (double b : {0.25, 1.0, 4.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const TrigData d = random_trig(rng);
      const double a = -0.2 - 0.3 * trial;
      const double ref = oracle::sign_change_fourier(d.hc, d.us, a, b);
      const double got = sign_change_criterion_b(from_cos(d.hc), from_sin(d.us), a, b);
      EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref))) << b << " " << trial;
    }
  }
}

TEST(SignChangeCriterion, KernelSumAgreesWithUnitCalibration) {
  std::mt19937_64 rng(67);
  for (double b : {0.25, 1.0, 4.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const TrigData d = random_trig(rng);
      const double a = -0.5 - 0.25 * trial;
      const auto h = from_cos(d.hc);
      const auto u = from_sin(d.us);
      const double fourier = sign_change_criterion_b(h, u, a, b);
      const double kernel = sign_change_criterion_kernel(h, u, a, b);
      EXPECT_NEAR(kernel, fourier, 1e-8 * std::max(1.0, std::abs(fourier))) << b << " " << trial;
    }
  }
}

TEST(SignChangeCriterion, ScalingDecomposition) {
  // With h = 1 the result is linear in u; with general h it is still linear
  // in u for fixed h, and affine in a.
  std::mt19937_64 rng(71);
  const TrigData d = random_trig(rng);
  const auto h = from_cos(d.hc);
  const auto u = from_sin(d.us);
  const auto one = SpectralField::constant(64, 1.0);
  EXPECT_NEAR(sign_change_criterion_b(one, u * 2.0, -1.0, 1.0), 2 * sign_change_criterion_b(one, u, -1.0, 1.0), 1e-13);
  EXPECT_NEAR(sign_change_criterion_b(h, u * 3.0, -0.7, 0.5), 3 * sign_change_criterion_b(h, u, -0.7, 0.5), 1e-13);
  const double c0 = sign_change_criterion_b(h, u, 0.0, 0.5);
  const double c1 = sign_change_criterion_b(h, u, -1.0, 0.5);
  const double c2 = sign_change_criterion_b(h, u, -2.0, 0.5);
  EXPECT_NEAR(c2 - c1, c1 - c0, 1e-13);
}

TEST(SampleDiagnostics, FieldsFollowConfig) {
  const auto p = abcd(-1.0 / 30, 0.2, -1.0 / 30, 0.2);
  const ModelState s{field(64, [](double x) { return 1 + 0.1 * std::cos(x); }),
                     field(64, [](double x) { return 0.1 * std::sin(x); }), 0.0};
  const auto ctx = energy_context(s, p);
  ASSERT_TRUE(ctx.has_value());
  EXPECT_EQ(ctx->energy_case, EnergyCase::Case1);
  DiagnosticsConfig cfg;
  const DiagnosticsSample d = sample_diagnostics(s, p, cfg, ctx);
  EXPECT_TRUE(d.jet && d.energy && d.fit_h && d.fit_u && d.hamiltonian);
  EXPECT_FALSE(d.functionals.has_value());
  EXPECT_NEAR(d.mean_h, 1.0, 1e-15);
  ModelState late = s;
  late.t = 0.2;  // nu = 0.9 - (7/6) 0.2 is still inside the strip
  EXPECT_TRUE(sample_diagnostics(late, p, cfg, ctx).energy.has_value());
  late.t = 0.6;
  EXPECT_FALSE(sample_diagnostics(late, p, cfg, ctx).energy.has_value());
}

}  // namespace
