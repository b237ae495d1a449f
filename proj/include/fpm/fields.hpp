#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fpm/grid.hpp"

namespace fpm {

using cplx = std::complex<double>;

/// Grid values of a real function, row-major over x_j = j * dx.
struct RealField {
  TorusGrid grid;
  std::vector<double> values;

  explicit RealField(const TorusGrid& g) : grid(g), values(g.size(), 0.0) {}
  RealField(const TorusGrid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw std::invalid_argument("RealField: size does not match grid");
  }

  /// Samples f at every grid point.
  template <class F>
  static RealField sample(const TorusGrid& g, F&& f) {
    RealField r(g);
    for (std::size_t i = 0; i < g.size(); ++i) r.values[i] = f(g.point(i));
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  bool finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  }
};

/// Fourier coefficients c_k of rho(x) = sum_k c_k exp(i k.x), stored in the
/// grid's FFT order. c_0 is the mean.
struct SpectralField {
  TorusGrid grid;
  std::vector<cplx> coeffs;

  explicit SpectralField(const TorusGrid& g) : grid(g), coeffs(g.size(), cplx{}) {}
  SpectralField(const TorusGrid& g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size()) throw std::invalid_argument("SpectralField: size does not match grid");
  }

  /// Coefficient at a lattice point; zero outside the lattice.
  cplx at(const Wave& k) const {
    auto i = grid.index_of(k);
    return i ? coeffs[*i] : cplx{};
  }
  /// Writes c_k; throws outside the lattice.
  void set(const Wave& k, cplx v) {
    auto i = grid.index_of(k);
    if (!i) throw std::out_of_range("SpectralField::set: wavenumber outside lattice");
    coeffs[*i] = v;
  }
  /// Writes c_k and c_{-k} = conj(c_k).
  void set_hermitian(const Wave& k, cplx v) {
    set(k, v);
    set({-k[0], -k[1]}, std::conj(v));
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
  bool finite() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "SpectralField +=");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "SpectralField -=");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  SpectralField& operator*=(cplx s) {
    for (cplx& c : coeffs) c *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }
};

/// Largest deviation from c_{-k} = conj(c_k) over pairs with a partner.
inline double hermitian_defect(const SpectralField& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    const std::size_t j = f.grid.mirror(i);
    worst = std::max(worst, std::abs(f.coeffs[j] - std::conj(f.coeffs[i])));
  }
  return worst;
}

}  // namespace fpm
