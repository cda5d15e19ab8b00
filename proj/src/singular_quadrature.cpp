#include "swblow/singular_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "swblow/errors.hpp"

namespace swblow {

namespace {

struct CellMoments {
  long double plain;     // int_0^1 (i+s)^-lambda ds
  long double weighted;  // int_0^1 s (i+s)^-lambda ds
};

// Moments on cell [i, i+1] in units of the cell width. Large i uses the
// binomial series of (1 + s/i)^-lambda to avoid cancellation.
CellMoments cell_moments(long i, long double lambda) {
  if (i == 0) return {1.0L / (1.0L - lambda), 1.0L / (2.0L - lambda)};
  const long double x = static_cast<long double>(i);
  if (i < 16) {
    const long double p = 1.0L - lambda;
    const long double q = 2.0L - lambda;
    const long double plain = (std::pow(x + 1.0L, p) - std::pow(x, p)) / p;
    const long double second = (std::pow(x + 1.0L, q) - std::pow(x, q)) / q;
    return {plain, second - x * plain};
  }
  long double coeff = 1.0L;
  long double inv_pow = 1.0L;
  long double plain = 0.0L;
  long double weighted = 0.0L;
  for (int m = 0; m < 20; ++m) {
    plain += coeff * inv_pow / (m + 1);
    weighted += coeff * inv_pow / (m + 2);
    coeff *= (-lambda - m) / (m + 1);
    inv_pow /= x;
  }
  const long double scale = std::pow(x, -lambda);
  return {scale * plain, scale * weighted};
}

}  // namespace

SingularQuadrature::SingularQuadrature(double lambda, double omega, int cells)
    : lambda_(lambda), omega_(omega) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("singular weight exponent must lie in (0, 1)");
  if (!(omega > 0.0)) throw DomainError("integration length omega must be positive");
  if (cells < 1) throw DomainError("quadrature needs at least one cell");
  weights_.assign(static_cast<std::size_t>(cells) + 1, 0.0);
  const long double width = static_cast<long double>(omega) / cells;
  const long double scale = std::pow(width, 1.0L - lambda);
  std::vector<long double> w(weights_.size(), 0.0L);
  for (long i = 0; i < cells; ++i) {
    const CellMoments m = cell_moments(i, lambda);
    w[static_cast<std::size_t>(i)] += scale * (m.plain - m.weighted);
    w[static_cast<std::size_t>(i) + 1] += scale * m.weighted;
  }
  for (std::size_t j = 0; j < w.size(); ++j) weights_[j] = static_cast<double>(w[j]);
}

std::vector<double> SingularQuadrature::nodes() const {
  const int n = cells();
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = omega_ * j / n;
  return x;
}

double SingularQuadrature::integrate(std::span<const double> values) const {
  if (values.size() != weights_.size()) {
    throw DomainError("expected " + std::to_string(weights_.size()) + " node values, got " +
                      std::to_string(values.size()));
  }
  long double sum = 0.0L;
  for (std::size_t j = 0; j < values.size(); ++j) sum += static_cast<long double>(weights_[j]) * values[j];
  return static_cast<double>(sum);
}

std::vector<Complex> SingularQuadrature::fourier_moments(int kmax) const {
  std::vector<Complex> moments(static_cast<std::size_t>(kmax) + 1);
  const int n = cells();
  for (int j = 0; j <= n; ++j) {
    const Complex step = std::polar(1.0, omega_ * j / n);
    Complex phase(weights_[static_cast<std::size_t>(j)], 0.0);
    for (int k = 0; k <= kmax; ++k) {
      moments[static_cast<std::size_t>(k)] += phase;
      phase *= step;
    }
  }
  return moments;
}

double integrate_with_moments(const SpectralField& f, std::span<const Complex> moments) {
  const int kmax = f.max_mode();
  if (moments.size() < static_cast<std::size_t>(kmax) + 1) {
    throw DomainError("Fourier moments cover fewer modes than the field");
  }
  double sum = (f[0] * moments[0]).real();
  for (int k = 1; k <= kmax; ++k) sum += 2.0 * (f[k] * moments[static_cast<std::size_t>(k)]).real();
  return sum;
}

}  // namespace swblow
