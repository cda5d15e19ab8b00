#include "swblow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "swblow/errors.hpp"

namespace swblow {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
// Plans are created once per size under a lock and reused for the lifetime of
// the process. FFTW_UNALIGNED lets any std::vector buffer be passed in.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : r2c_) fftw_destroy_plan(plan);
    for (auto& [n, plan] : c2r_) fftw_destroy_plan(plan);
  }

  fftw_plan r2c(int n) {
    std::lock_guard lock(mutex_);
    auto it = r2c_.find(n);
    if (it != r2c_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(n));
    std::vector<Complex> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    r2c_.emplace(n, plan);
    return plan;
  }

  fftw_plan c2r(int n) {
    std::lock_guard lock(mutex_);
    auto it = c2r_.find(n);
    if (it != c2r_.end()) return it->second;
    std::vector<Complex> in(static_cast<std::size_t>(n / 2 + 1));
    std::vector<double> out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> r2c_;
  std::map<int, fftw_plan> c2r_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

// exp(ik*pi) for the shift between x_j = -pi + 2*pi*j/m and FFTW's 2*pi*j/m.
inline double shift_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

void validate_grid_size(int n) {
  if (n < 8 || n % 2 != 0) {
    throw ConfigError("grid size must be even and at least 8, got " + std::to_string(n));
  }
}

double GridField::min() const { return *std::min_element(samples_.begin(), samples_.end()); }
double GridField::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

SpectralField::SpectralField(int grid_size) : n_(grid_size) {
  validate_grid_size(grid_size);
  c_.assign(static_cast<std::size_t>(2 * max_mode() + 1), Complex{});
}

SpectralField SpectralField::constant(int grid_size, double value) {
  SpectralField f(grid_size);
  f.set_mode(0, value);
  return f;
}

SpectralField SpectralField::from_modes(int grid_size, std::vector<Complex> modes) {
  SpectralField f(grid_size);
  if (modes.size() != f.c_.size()) {
    throw ConfigError("expected " + std::to_string(f.c_.size()) + " coefficients for grid size " +
                      std::to_string(grid_size) + ", got " + std::to_string(modes.size()));
  }
  f.c_ = std::move(modes);
  return f;
}

void SpectralField::set_mode(int k, Complex value) {
  const int kmax = max_mode();
  if (k < -kmax || k > kmax) {
    throw DomainError("mode " + std::to_string(k) + " outside retained range |k| <= " +
                      std::to_string(kmax));
  }
  if (k == 0) {
    c_[static_cast<std::size_t>(kmax)] = value.real();
    return;
  }
  if (k < 0) {
    k = -k;
    value = std::conj(value);
  }
  c_[static_cast<std::size_t>(kmax + k)] = value;
  c_[static_cast<std::size_t>(kmax - k)] = std::conj(value);
}

double SpectralField::hermitian_defect() const {
  const int kmax = max_mode();
  double defect = std::abs((*this)[0].imag());
  for (int k = 1; k <= kmax; ++k) {
    defect = std::max(defect, std::abs((*this)[-k] - std::conj((*this)[k])));
  }
  return defect;
}

double SpectralField::max_abs_coefficient() const {
  double m = 0.0;
  for (const Complex& c : c_) m = std::max(m, std::abs(c));
  return m;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.n_ != n_) throw ConfigError("grid size mismatch in field addition");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (other.n_ != n_) throw ConfigError("grid size mismatch in field subtraction");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (Complex& c : c_) c *= s;
  return *this;
}

SpectralField SpectralField::plus_constant(double s) const {
  SpectralField out = *this;
  out.c_[static_cast<std::size_t>(max_mode())] += s;
  return out;
}

std::vector<double> to_grid(const SpectralField& f, int m) {
  const int kmax = f.max_mode();
  if (m % 2 != 0 || m < 2 * kmax + 2) {
    throw ConfigError("target grid of size " + std::to_string(m) + " cannot hold modes up to " +
                      std::to_string(kmax));
  }
  std::vector<Complex> half(static_cast<std::size_t>(m / 2 + 1));
  for (int k = 0; k <= kmax; ++k) half[static_cast<std::size_t>(k)] = shift_sign(k) * f[k];
  half[0] = half[0].real();
  std::vector<double> out(static_cast<std::size_t>(m));
  fftw_execute_dft_c2r(plans().c2r(m), reinterpret_cast<fftw_complex*>(half.data()), out.data());
  return out;
}

SpectralField from_grid(std::span<const double> samples, int n) {
  const int m = static_cast<int>(samples.size());
  validate_grid_size(n);
  if (m % 2 != 0 || m < n) {
    throw ConfigError("cannot project " + std::to_string(m) + " samples onto grid size " +
                      std::to_string(n));
  }
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> half(static_cast<std::size_t>(m / 2 + 1));
  fftw_execute_dft_r2c(plans().r2c(m), in.data(), reinterpret_cast<fftw_complex*>(half.data()));
  SpectralField f(n);
  const double scale = 1.0 / m;
  for (int k = 0; k <= f.max_mode(); ++k) {
    f.set_mode(k, shift_sign(k) * scale * half[static_cast<std::size_t>(k)]);
  }
  return f;
}

SpectralField transform_forward(const GridField& g) {
  const int n = static_cast<int>(g.size());
  validate_grid_size(n);
  return from_grid(g.samples(), n);
}

GridField transform_inverse(const SpectralField& f) {
  if (f.empty()) throw ConfigError("transform_inverse of an empty field");
  const double residue = f.hermitian_defect();
  if (residue > 1e-12 * std::max(1.0, f.max_abs_coefficient())) {
    throw SymmetryError("coefficients are not Hermitian-symmetric (defect " +
                        std::to_string(residue) + "); the field is not real");
  }
  return GridField(to_grid(f, f.grid_size()));
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 0 || order > 4) {
    throw DomainError("derivative order must lie in [0, 4], got " + std::to_string(order));
  }
  if (order == 0) return f;
  // i^order, applied exactly
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex unit = kIPow[order % 4];
  return apply_multiplier(f, [&](int k) { return unit * std::pow(static_cast<double>(k), order); });
}

double evaluate_at(const SpectralField& f, double x) {
  double sum = f[0].real();
  for (int k = 1; k <= f.max_mode(); ++k) {
    sum += 2.0 * (f[k] * std::polar(1.0, k * x)).real();
  }
  return sum;
}

std::vector<double> evaluate_at(const SpectralField& f, std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(evaluate_at(f, x));
  return out;
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
  if (f.grid_size() != g.grid_size()) {
    throw ConfigError("multiply: grid sizes differ (" + std::to_string(f.grid_size()) + " vs " +
                      std::to_string(g.grid_size()) + ")");
  }
  const int m = 2 * f.grid_size();
  std::vector<double> a = to_grid(f, m);
  const std::vector<double> b = to_grid(g, m);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] *= b[j];
  return from_grid(a, f.grid_size());
}

double x_tau_norm(const SpectralField& f, double tau) {
  if (!(tau >= 0.0)) throw DomainError("x_tau_norm requires tau >= 0");
  double sum = std::abs(f[0]);
  for (int k = 1; k <= f.max_mode(); ++k) {
    sum += std::exp(tau * k) * (std::abs(f[k]) + std::abs(f[-k]));
  }
  return sum;
}

SpectralField even_part(const SpectralField& f) {
  SpectralField out(f.grid_size());
  for (int k = 0; k <= f.max_mode(); ++k) out.set_mode(k, Complex(f[k].real(), 0.0));
  return out;
}

SpectralField odd_part(const SpectralField& f) {
  SpectralField out(f.grid_size());
  for (int k = 1; k <= f.max_mode(); ++k) out.set_mode(k, Complex(0.0, f[k].imag()));
  return out;
}

}  // namespace swblow
