#pragma once

#include <span>
#include <vector>

#include "swblow/spectral.hpp"

namespace swblow {

// Product rule for integral_0^omega f(x) x^(-lambda) dx.
//
// [0, omega] is split into equal cells; f is replaced by its piecewise-linear
// interpolant through the nodes and the moments of x^(-lambda) and
// x^(1-lambda) are integrated exactly on each cell. The rule is therefore
// exact (to rounding) for any f that is piecewise linear on the mesh.
class SingularQuadrature {
 public:
  static constexpr int kDefaultCells = 32768;

  SingularQuadrature(double lambda, double omega, int cells = kDefaultCells);

  double lambda() const { return lambda_; }
  double omega() const { return omega_; }
  int cells() const { return static_cast<int>(weights_.size()) - 1; }

  // x_j = j * omega / cells, j = 0..cells
  std::vector<double> nodes() const;
  std::span<const double> weights() const { return weights_; }

  // values[j] = f(x_j)
  double integrate(std::span<const double> values) const;

  // W(k) = sum_j w_j exp(i k x_j) for k = 0..kmax. Applying the rule to a
  // band-limited field reduces to Re sum_k c(k) W(k).
  std::vector<Complex> fourier_moments(int kmax) const;

 private:
  double lambda_;
  double omega_;
  std::vector<double> weights_;
};

// Product rule applied to a field through its Fourier moments.
double integrate_with_moments(const SpectralField& f, std::span<const Complex> moments);

}  // namespace swblow
