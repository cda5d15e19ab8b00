#pragma once

// Independent reference computations shared by unit and acceptance tests.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "swblow/spectral.hpp"

namespace oracle {

// Second-order conservative finite differences for
//   h w - (mu/3) d/dx(h^3 dw/dx) = h f
// on the periodic m-point grid x_j = -pi + 2 pi j / m. h^3 is taken at the
// half points. Returns w at the grid points.
inline std::vector<double> sgn_fd_solve(const swblow::SpectralField& h, const swblow::SpectralField& f, double mu,
                                        int m) {
  const double dx = 2.0 * std::numbers::pi / m;
  std::vector<double> xs(static_cast<std::size_t>(m));
  std::vector<double> xh(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    xs[static_cast<std::size_t>(j)] = swblow::GridField::node(j, m);
    xh[static_cast<std::size_t>(j)] = xs[static_cast<std::size_t>(j)] + dx / 2;
  }
  const auto hv = swblow::evaluate_at(h, xs);
  const auto fv = swblow::evaluate_at(f, xs);
  auto hh = swblow::evaluate_at(h, xh);
  for (auto& v : hh) v = v * v * v;
  const double s = mu / (3.0 * dx * dx);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(m);
  for (int j = 0; j < m; ++j) {
    const int jp = (j + 1) % m;
    const int jm = (j + m - 1) % m;
    const double right = hh[static_cast<std::size_t>(j)];
    const double left = hh[static_cast<std::size_t>(jm)];
    trip.emplace_back(j, j, hv[static_cast<std::size_t>(j)] + s * (right + left));
    trip.emplace_back(j, jp, -s * right);
    trip.emplace_back(j, jm, -s * left);
    rhs(j) = hv[static_cast<std::size_t>(j)] * fv[static_cast<std::size_t>(j)];
  }
  Eigen::SparseMatrix<double> a(m, m);
  a.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("finite-difference factorization failed");
  const Eigen::VectorXd w = lu.solve(rhs);
  return {w.data(), w.data() + m};
}

// Richardson combination of the m/2 and m grids, reported on the m/2 grid.
inline std::vector<double> sgn_fd_richardson(const swblow::SpectralField& h, const swblow::SpectralField& f,
                                             double mu, int m) {
  const auto fine = sgn_fd_solve(h, f, mu, m);
  const auto coarse = sgn_fd_solve(h, f, mu, m / 2);
  std::vector<double> out(coarse.size());
  for (std::size_t j = 0; j < coarse.size(); ++j) out[j] = (4.0 * fine[2 * j] - coarse[j]) / 3.0;
  return out;
}

// -[(1 - b d_xx)^-1 d_x (a u_xx + h u)](0) for h = sum hc[k] cos kx and
// u = sum us[k] sin kx. The flux is sampled pointwise from the closed forms,
// transformed by a direct DFT on a grid that resolves the product, and summed
// mode by mode.
inline double sign_change_fourier(const std::vector<double>& hc, const std::vector<double>& us, double a,
                                  double b) {
  const int top = static_cast<int>(std::max(hc.size(), us.size()));
  const int n = 4 * top + 8;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    double h = 0.0, u = 0.0, uxx = 0.0;
    for (std::size_t k = 0; k < hc.size(); ++k) h += hc[k] * std::cos(static_cast<double>(k) * x);
    for (std::size_t k = 0; k < us.size(); ++k) {
      const double kk = static_cast<double>(k);
      u += us[k] * std::sin(kk * x);
      uxx -= kk * kk * us[k] * std::sin(kk * x);
    }
    g[static_cast<std::size_t>(j)] = a * uxx + h * u;
  }
  double sum = 0.0;
  for (int k = -(n / 2 - 1); k <= n / 2 - 1; ++k) {
    std::complex<double> c = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
      c += g[static_cast<std::size_t>(j)] * std::polar(1.0, -k * x);
    }
    c /= static_cast<double>(n);
    sum += (std::complex<double>(0.0, k) * c).real() / (1.0 + b * k * k);
  }
  return -sum;
}

}  // namespace oracle
