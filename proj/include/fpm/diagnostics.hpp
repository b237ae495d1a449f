#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fpm/fields.hpp"
#include "fpm/model.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

/// Total mass (2 pi)^d Re c_0.
inline double mass(const SpectralField& F) { return F.grid.volume() * F.coeffs[0].real(); }

/// Homogeneous:   ( (2pi)^d sum_{k != 0} |k|^{2s} |c_k|^2 )^{1/2}
/// Inhomogeneous: ( (2pi)^d sum_k (1 + |k|^2)^s |c_k|^2 )^{1/2}
inline double sobolev_norm(const SpectralField& F, double s, bool homogeneous) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const double r2 = dot(F.grid.wavevector(i), F.grid.wavevector(i));
    const double a = std::norm(F.coeffs[i]);
    if (homogeneous) {
      if (r2 > 0.0) acc += std::pow(r2, s) * a;
    } else {
      acc += std::pow(1.0 + r2, s) * a;
    }
  }
  return std::sqrt(F.grid.volume() * acc);
}

/// sum_k |k|^2 (1 + |k|) |c_k|
inline double blowup_B1(const SpectralField& F) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const double r = F.grid.wave_norm(i);
    acc += r * r * (1.0 + r) * std::abs(F.coeffs[i]);
  }
  return acc;
}

/// ( sum_k |k| (1 + |k|) |c_k| )^2
inline double blowup_B2(const SpectralField& F) {
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const double r = F.grid.wave_norm(i);
    acc += r * (1.0 + r) * std::abs(F.coeffs[i]);
  }
  return acc * acc;
}

// ---------------------------------------------------------------------------
// Trilinear form  T[G] = Re sum_{xi, eta} G(xi, eta) conj(c_xi) c_eta c_{xi - eta}
//
// Sums run over the lattice; a difference xi - eta outside the lattice
// contributes nothing (no periodic wrap). Both evaluation paths use this
// convention.

/// One product term a(xi) b(eta) of a separable kernel.
struct SeparableTerm {
  std::function<double(const Vec2&)> left;
  std::function<double(const Vec2&)> right;
};

struct TrilinearKernel {
  std::string name;
  std::function<double(const Vec2&, const Vec2&)> eval;
  /// Empty when the kernel has no separable form.
  std::vector<SeparableTerm> separable;
};

enum class TrilinearMode { naive, fft };

struct TrilinearSum {
  double value = 0.0;
  /// sum |G| |c_xi| |c_eta| |c_{xi-eta}|, the natural magnitude of `value`.
  double scale = 0.0;
};

inline constexpr int kNaiveTrilinearMaxN = 64;

/// Direct O(N^{2d}) double sum.
inline TrilinearSum trilinear_naive(const TrilinearKernel& G, const SpectralField& F) {
  const TorusGrid& g = F.grid;
  if (g.n() > kNaiveTrilinearMaxN) throw std::invalid_argument("trilinear_T: naive mode requires N <= 64");
  TrilinearSum out;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const cplx cx = std::conj(F.coeffs[i]);
    if (cx == cplx{}) continue;
    const Wave xi = g.wave(i);
    for (std::size_t j = 0; j < F.coeffs.size(); ++j) {
      const Wave eta = g.wave(j);
      const auto d = g.index_of({xi[0] - eta[0], xi[1] - eta[1]});
      if (!d) continue;
      const double w = G.eval(to_vec(xi), to_vec(eta));
      if (w == 0.0) continue;
      const cplx term = cx * F.coeffs[j] * F.coeffs[*d];
      out.value += w * term.real();
      out.scale += std::abs(w) * std::abs(term);
    }
  }
  return out;
}

namespace detail {

/// Places F's coefficients on a lattice twice as wide, without Nyquist
/// splitting, so that a circular convolution there equals the linear one.
inline SpectralField place_padded(const SpectralField& F, const std::function<double(const Vec2&)>& weight) {
  const TorusGrid padded(F.grid.dim(), 2 * F.grid.n());
  SpectralField out(padded);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const Wave k = F.grid.wave(i);
    const double w = weight ? weight(to_vec(k)) : 1.0;
    out.coeffs[*padded.index_of(k)] = w * F.coeffs[i];
  }
  return out;
}

}  // namespace detail

/// FFT evaluation for separable kernels: for each term, the inner eta-sum is a
/// zero-padded linear convolution of (right * c) with c.
inline double trilinear_fft(const TrilinearKernel& G, const SpectralField& F) {
  if (G.separable.empty()) throw std::invalid_argument("trilinear_T: fft mode requires a separable kernel");
  const TorusGrid& g = F.grid;
  const SpectralField plain = detail::place_padded(F, {});
  const std::vector<cplx> plain_vals = detail::to_values(plain);
  double total = 0.0;
  for (const SeparableTerm& term : G.separable) {
    std::vector<cplx> vals = detail::to_values(detail::place_padded(F, term.right));
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] *= plain_vals[i];
    const SpectralField conv = detail::from_values(plain.grid, std::move(vals));
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
      const Wave xi = g.wave(i);
      const cplx s = conv.coeffs[*plain.grid.index_of(xi)];
      total += term.left(to_vec(xi)) * (std::conj(F.coeffs[i]) * s).real();
    }
  }
  return total;
}

inline double trilinear_T(const TrilinearKernel& G, const SpectralField& F, TrilinearMode mode) {
  return mode == TrilinearMode::naive ? trilinear_naive(G, F).value : trilinear_fft(G, F);
}

/// G = |xi|^{2s} xi.eta |eta|^{-2b} chi(mu |eta|), the kernel of the energy
/// identity  d/dt (1/2)||rho||_{H^s-dot}^2 = (2pi)^d c_K T[G] - nu ||rho||_{H^{s+1}-dot}^2.
/// s = 0 gives the L^2 identity (the xi = 0 weight is then 1, multiplied by xi.eta = 0).
inline TrilinearKernel energy_kernel(const ModelParams& p, double s) {
  auto pot = [p](const Vec2& eta) {
    const double r = norm(eta);
    return r > 0.0 ? p.potential_symbol(r) : 0.0;
  };
  auto xi_weight = [s](const Vec2& xi) {
    if (s == 0.0) return 1.0;
    const double r = norm(xi);
    return r > 0.0 ? std::pow(r, 2.0 * s) : 0.0;
  };
  TrilinearKernel G;
  G.name = "energy_s" + std::to_string(s);
  G.eval = [=](const Vec2& xi, const Vec2& eta) { return xi_weight(xi) * dot(xi, eta) * pot(eta); };
  for (std::size_t axis = 0; axis < 2; ++axis) {
    G.separable.push_back({[=](const Vec2& xi) { return xi_weight(xi) * xi[axis]; },
                           [=](const Vec2& eta) { return eta[axis] * pot(eta); }});
  }
  return G;
}

// ---------------------------------------------------------------------------
// Energy identity residuals

struct TimedState {
  double t = 0.0;
  SpectralField rho_hat;
};

namespace detail {

/// Weights of the derivative at times[center] of the interpolating polynomial
/// through all nodes.
inline std::vector<double> derivative_weights(std::span<const double> times, std::size_t center) {
  const std::size_t n = times.size();
  const double x = times[center];
  std::vector<double> w(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      double prod = 1.0 / (times[j] - times[m]);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j || l == m) continue;
        prod *= (x - times[l]) / (times[j] - times[l]);
      }
      acc += prod;
    }
    w[j] = acc;
  }
  return w;
}

}  // namespace detail

/// Energy E = (1/2)||rho||^2 in L^2 (s = nullopt) or H^s-dot.
inline double half_energy(const SpectralField& F, std::optional<double> s) {
  const double n = s ? sobolev_norm(F, *s, true) : l2_norm(F);
  return 0.5 * n * n;
}

/// Predicted dE/dt from the trilinear form and the dissipation.
inline double energy_rate(const SpectralField& F, const ModelParams& p, std::optional<double> s) {
  const double s_val = s.value_or(0.0);
  double rate = 0.0;
  if (p.c_K != 0.0) rate += F.grid.volume() * p.c_K * trilinear_fft(energy_kernel(p, s_val), F);
  if (p.nu != 0.0) {
    const double diss = sobolev_norm(F, s_val + 1.0, true);
    rate -= p.nu * diss * diss;
  }
  return rate;
}

/// |finite-difference dE/dt - predicted rate| at history[center], using every
/// state in `history` as a stencil node.
inline double energy_residual(std::span<const TimedState> history, std::size_t center, const ModelParams& p,
                              std::optional<double> s) {
  if (history.size() < 2 || center >= history.size()) throw std::invalid_argument("energy_residual: insufficient history");
  std::vector<double> times;
  for (const TimedState& h : history) times.push_back(h.t);
  const std::vector<double> w = detail::derivative_weights(times, center);
  double dE = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) dE += w[j] * half_energy(history[j].rho_hat, s);
  return std::abs(dE - energy_rate(history[center].rho_hat, p, s));
}

/// L^2 identity residual at the middle of >= 3 consecutive samples.
inline double energy_residual_L2(std::span<const TimedState> history, const ModelParams& p) {
  if (history.size() < 3) throw std::invalid_argument("energy_residual_L2: need at least 3 states");
  return energy_residual(history, history.size() / 2, p, std::nullopt);
}

/// H^s-dot identity residual at the middle of >= 3 consecutive samples.
inline double energy_residual_Hs(std::span<const TimedState> history, const ModelParams& p, double s) {
  if (history.size() < 3) throw std::invalid_argument("energy_residual_Hs: need at least 3 states");
  return energy_residual(history, history.size() / 2, p, s);
}

// ---------------------------------------------------------------------------
// Per-sample record

struct SobolevEntry {
  double s = 0.0;
  double homogeneous = 0.0;
  double inhomogeneous = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double min_rho = 0.0;
  double max_rho = 0.0;
  double l2 = 0.0;
  std::vector<SobolevEntry> hs;
  double B1 = 0.0;
  double B2 = 0.0;
  double int_B1 = 0.0;
  double int_B2sq = 0.0;
  double energy_residual_L2 = 0.0;
  double energy_residual_Hs = 0.0;

  bool finite() const {
    auto ok = [](double v) { return std::isfinite(v); };
    bool all = ok(t) && ok(mass) && ok(min_rho) && ok(max_rho) && ok(l2) && ok(B1) && ok(B2) && ok(int_B1) &&
               ok(int_B2sq) && ok(energy_residual_L2) && ok(energy_residual_Hs);
    for (const auto& e : hs) all = all && ok(e.homogeneous) && ok(e.inhomogeneous);
    return all;
  }
};

/// Pointwise quantities of a sample; time integrals and energy residuals are
/// filled in by the integrator.
inline DiagnosticsRecord measure(double t, const SpectralField& rho_hat, std::span<const double> s_list) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = mass(rho_hat);
  const RealField rho = inverse_transform(rho_hat);
  const auto [lo, hi] = std::minmax_element(rho.values.begin(), rho.values.end());
  r.min_rho = *lo;
  r.max_rho = *hi;
  r.l2 = l2_norm(rho_hat);
  for (double s : s_list) r.hs.push_back({s, sobolev_norm(rho_hat, s, true), sobolev_norm(rho_hat, s, false)});
  r.B1 = blowup_B1(rho_hat);
  r.B2 = blowup_B2(rho_hat);
  return r;
}

}  // namespace fpm
