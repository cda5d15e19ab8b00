#pragma once

// Fourier representation of real 2*pi-periodic functions on [-pi, pi].
//
// Convention: c(k) = (1/2pi) * integral f(x) exp(-ikx) dx, realized on the
// grid x_j = -pi + 2*pi*j/N as c(k) = (1/N) sum_j f(x_j) exp(-ikx_j).
// Retained modes are |k| <= K = N/2 - 1; the Nyquist mode is always dropped.

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace swblow {

using Complex = std::complex<double>;

// Throws ConfigError unless n is even and n >= 8.
void validate_grid_size(int n);

class GridField {
 public:
  GridField() = default;
  explicit GridField(std::vector<double> samples) : samples_(std::move(samples)) {}

  static double node(int j, int n) {
    return -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
  }

  template <class F>
  static GridField sample(int n, F&& f) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = f(node(j, n));
    return GridField(std::move(s));
  }

  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t j) const { return samples_[j]; }
  double& operator[](std::size_t j) { return samples_[j]; }
  std::span<const double> samples() const { return samples_; }
  double min() const;
  double max() const;

 private:
  std::vector<double> samples_;
};

class SpectralField {
 public:
  SpectralField() = default;

  // Zero field on an n-point grid.
  explicit SpectralField(int grid_size);

  static SpectralField constant(int grid_size, double value);

  // Takes the full coefficient vector ordered k = -K..K. Symmetry is not
  // enforced here; transform_inverse rejects non-Hermitian input.
  static SpectralField from_modes(int grid_size, std::vector<Complex> modes);

  int grid_size() const { return n_; }
  int max_mode() const { return n_ / 2 - 1; }
  bool empty() const { return n_ == 0; }

  // Coefficient c(k); zero for |k| > K.
  Complex operator[](int k) const {
    const int kmax = max_mode();
    if (k < -kmax || k > kmax) return {};
    return c_[static_cast<std::size_t>(k + kmax)];
  }

  // Sets c(k) and c(-k) = conj(c(k)). For k = 0 the imaginary part is dropped.
  void set_mode(int k, Complex value);

  std::span<const Complex> coefficients() const { return c_; }

  double mean() const { return (*this)[0].real(); }

  // max_k |c(-k) - conj(c(k))|, including |Im c(0)|.
  double hermitian_defect() const;

  // max_k |c(k)|
  double max_abs_coefficient() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  // f + s (only the mean mode changes)
  SpectralField plus_constant(double s) const;

 private:
  int n_ = 0;
  std::vector<Complex> c_;
};

SpectralField transform_forward(const GridField& g);
GridField transform_inverse(const SpectralField& f);

// Coefficients multiplied by (ik)^order, order in [0, 4].
SpectralField derivative(const SpectralField& f, int order);

// Direct summation of the Fourier series at x.
double evaluate_at(const SpectralField& f, double x);
std::vector<double> evaluate_at(const SpectralField& f, std::span<const double> xs);

// Product computed on a 2N zero-padded grid and truncated back to |k| <= K.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

// sum_k exp(tau |k|) |c(k)|
double x_tau_norm(const SpectralField& f, double tau);

// Samples of f on an m-point grid x_j = -pi + 2*pi*j/m, m even and m >= N.
std::vector<double> to_grid(const SpectralField& f, int m);

// Projects m samples onto an n-point spectral field (modes |k| <= n/2 - 1).
SpectralField from_grid(std::span<const double> samples, int n);

// Applies a Fourier multiplier symbol(k) to every mode.
template <class Symbol>
SpectralField apply_multiplier(const SpectralField& f, Symbol&& symbol) {
  SpectralField out(f.grid_size());
  const int kmax = f.max_mode();
  for (int k = 0; k <= kmax; ++k) out.set_mode(k, symbol(k) * f[k]);
  return out;
}

// Even real part / odd imaginary part of a real field.
SpectralField even_part(const SpectralField& f);
SpectralField odd_part(const SpectralField& f);

}  // namespace swblow
