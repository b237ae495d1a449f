#pragma once

// Direct reference computations, written without the library's transform or
// indexing helpers.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "fpm/fpm.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Coeffs = std::map<std::pair<int, int>, cplx>;

inline int wrap(int j, int n) { return j < n / 2 ? j : j - n; }

/// Direct DFT coefficients c_k = N^{-d} sum_x f(x) e^{-i k.x}.
inline Coeffs dft(const std::vector<double>& values, int d, int n) {
  const double h = 2.0 * std::numbers::pi / n;
  Coeffs out;
  const int n1 = d == 2 ? n : 1;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n1; ++b) {
      const int k0 = wrap(a, n), k1 = d == 2 ? wrap(b, n) : 0;
      cplx acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n1; ++j) {
          const double x0 = i * h, x1 = j * h;
          acc += values[std::size_t(i * n1 + j)] * std::polar(1.0, -(k0 * x0 + k1 * x1));
        }
      out[{k0, k1}] = acc / std::pow(double(n), d);
    }
  return out;
}

/// Linear convolution of two coefficient maps.
inline Coeffs convolve(const Coeffs& a, const Coeffs& b) {
  Coeffs out;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  return out;
}

inline Coeffs to_map(const fpm::SpectralField& F) {
  Coeffs out;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto k = F.grid.wave(i);
    out[{k[0], k[1]}] = F.coeffs[i];
  }
  return out;
}

inline cplx get(const Coeffs& c, int k0, int k1) {
  auto it = c.find({k0, k1});
  return it == c.end() ? cplx{} : it->second;
}

/// Real random field supported on 3|k_j| < n with Hermitian coefficients.
inline fpm::SpectralField random_band_field(const fpm::TorusGrid& g, unsigned seed, bool zero_mean = false) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  fpm::SpectralField F(g);
  const int lim = (g.n() - 1) / 3;
  const int lim1 = g.dim() == 2 ? lim : 0;
  for (int a = 0; a <= lim; ++a)
    for (int b = -lim1; b <= lim1; ++b) {
      if (a == 0 && b < 0) continue;
      if (a == 0 && b == 0) {
        if (!zero_mean) F.set({0, 0}, nd(gen));
        continue;
      }
      F.set_hermitian({a, b}, cplx(nd(gen), nd(gen)));
    }
  return F;
}

/// Brute-force trilinear sum over an explicit list of lattice points.
inline double trilinear(const std::function<double(double, double, double, double)>& G, const fpm::SpectralField& F) {
  const Coeffs c = to_map(F);
  double total = 0.0;
  for (const auto& [x, cx] : c)
    for (const auto& [e, ce] : c) {
      auto it = c.find({x.first - e.first, x.second - e.second});
      if (it == c.end()) continue;
      total += G(x.first, x.second, e.first, e.second) * (std::conj(cx) * ce * it->second).real();
    }
  return total;
}

}  // namespace oracle
