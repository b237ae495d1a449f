#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpm/fft.hpp"
#include "fpm/fields.hpp"
#include "fpm/grid.hpp"

namespace fpm {

/// Thrown by inverse_transform when the coefficients do not describe a real
/// function.
class SymmetryViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients of f, normalized so that c_0 is the grid mean.
inline SpectralField forward_transform(const RealField& f) {
  if (f.values.size() != f.grid.size()) throw std::invalid_argument("forward_transform: size mismatch");
  SpectralField out(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) out.coeffs[i] = f.values[i];
  detail::dft_inplace(out.coeffs, f.grid.dim(), f.grid.n(), FFTW_FORWARD);
  const double scale = 1.0 / double(f.grid.size());
  for (cplx& c : out.coeffs) c *= scale;
  return out;
}

/// Relative tolerance on the Hermitian defect accepted by inverse_transform.
inline constexpr double kHermitianTolerance = 1e-9;

/// Grid values of sum_k c_k exp(i k.x). Rejects coefficients that are not
/// Hermitian (to kHermitianTolerance relative to the largest coefficient).
inline RealField inverse_transform(const SpectralField& F) {
  const double scale = F.max_abs();
  const double defect = hermitian_defect(F);
  if (defect > kHermitianTolerance * scale)
    throw SymmetryViolation("inverse_transform: coefficients are not Hermitian (defect " + std::to_string(defect) + ")");
  std::vector<cplx> work = F.coeffs;
  detail::dft_inplace(work, F.grid.dim(), F.grid.n(), FFTW_BACKWARD);
  RealField out(F.grid);
  for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = work[i].real();
  return out;
}

/// Fourier multiplier: symbol on nonzero lattice points plus an explicit value
/// at k = 0.
struct MultiplierSpec {
  std::function<cplx(const Vec2&)> symbol;
  cplx zero_mode{0.0};
};

inline SpectralField apply_multiplier(const SpectralField& F, const MultiplierSpec& m) {
  SpectralField out(F.grid);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const Vec2 k = F.grid.wavevector(i);
    out.coeffs[i] = (k[0] == 0.0 && k[1] == 0.0) ? m.zero_mode * F.coeffs[i] : m.symbol(k) * F.coeffs[i];
  }
  return out;
}

/// Lambda^s: symbol |k|^s, zero mode mapped to 0.
inline MultiplierSpec fractional_power(double s) {
  return {[s](const Vec2& k) { return cplx(std::pow(norm(k), s)); }, cplx(0.0)};
}

/// Partial derivative along `axis`: symbol i k_axis.
inline MultiplierSpec partial(int axis) {
  return {[axis](const Vec2& k) { return cplx(0.0, k[std::size_t(axis)]); }, cplx(0.0)};
}

/// Smooth cutoff chi on [0, inf) with chi(0) = 1 and support in [0, 1].
struct CutoffSpec {
  std::string name;
  std::function<double(double)> chi;

  /// exp(1 - 1/(1 - r^2)) on [0, 1), zero beyond.
  static CutoffSpec bump() {
    return {"bump", [](double r) { return r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }};
  }

  /// Equal to 1 on [0, 1/2], smooth monotone transition to 0 at r = 1.
  static CutoffSpec plateau() {
    return {"plateau", [](double r) {
              auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
              if (r <= 0.5) return 1.0;
              if (r >= 1.0) return 0.0;
              const double t = 2.0 * (1.0 - r);  // 1 at r = 1/2, 0 at r = 1
              return psi(t) / (psi(t) + psi(1.0 - t));
            }};
  }

  static CutoffSpec by_name(const std::string& name) {
    if (name == "bump") return bump();
    if (name == "plateau") return plateau();
    throw std::invalid_argument("unknown cutoff '" + name + "' (expected bump or plateau)");
  }
};

/// |k|^{-b} chi(mu |k|), zero at k = 0. With mu = 0 this is exactly
/// fractional_power(-b).
inline MultiplierSpec regularized_neg_power(double b, double mu, const CutoffSpec& cutoff) {
  if (!(b > 0.0)) throw std::invalid_argument("regularized_neg_power: b must be positive");
  if (!(mu >= 0.0)) throw std::invalid_argument("regularized_neg_power: mu must be nonnegative");
  if (mu == 0.0) return fractional_power(-b);
  return {[b, mu, chi = cutoff.chi](const Vec2& k) {
            const double r = norm(k);
            return cplx(std::pow(r, -b) * chi(mu * r));
          },
          cplx(0.0)};
}

/// True when every component satisfies 3|k_j| < N, the band kept by dealias.
inline bool in_dealias_band(const Wave& k, int n) { return 3 * std::abs(k[0]) < n && 3 * std::abs(k[1]) < n; }

/// Two-thirds rule: zeroes every coefficient with 3|k_j| >= N for some j.
inline SpectralField dealias(const SpectralField& F) {
  SpectralField out = F;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    if (!in_dealias_band(F.grid.wave(i), F.grid.n())) out.coeffs[i] = cplx{};
  return out;
}

/// Moves F to a lattice with n_new modes per dimension. Refining splits a
/// Nyquist coefficient evenly between -N/2 and +N/2; coarsening folds +/- the
/// new Nyquist back together, so resample(resample(F, 2N), N) == F and real
/// functions stay real.
inline SpectralField resample(const SpectralField& F, int n_new) {
  const TorusGrid target(F.grid.dim(), n_new);
  SpectralField out(target);
  const int n = F.grid.n();
  if (n_new == n) return F;
  if (n_new > n) {
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
      const Wave k = F.grid.wave(i);
      std::vector<Wave> images{k};
      for (int axis = 0; axis < F.grid.dim(); ++axis) {
        if (k[std::size_t(axis)] != -n / 2) continue;
        const std::size_t count = images.size();
        for (std::size_t j = 0; j < count; ++j) {
          Wave w = images[j];
          w[std::size_t(axis)] = n / 2;
          images.push_back(w);
        }
      }
      const double share = 1.0 / double(images.size());
      for (const Wave& w : images) out.coeffs[*target.index_of(w)] += share * F.coeffs[i];
    }
    return out;
  }
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    Wave k = F.grid.wave(i);
    bool keep = true;
    for (int axis = 0; axis < F.grid.dim(); ++axis) {
      int& w = k[std::size_t(axis)];
      if (w == n_new / 2) w = -n_new / 2;
      if (w < -n_new / 2 || w > n_new / 2) keep = false;
    }
    if (keep) out.coeffs[*target.index_of(k)] += F.coeffs[i];
  }
  return out;
}

namespace detail {

/// Grid values of the complex function with coefficients F (no symmetry check).
inline std::vector<cplx> to_values(const SpectralField& F) {
  std::vector<cplx> work = F.coeffs;
  dft_inplace(work, F.grid.dim(), F.grid.n(), FFTW_BACKWARD);
  return work;
}

inline SpectralField from_values(const TorusGrid& g, std::vector<cplx> values) {
  dft_inplace(values, g.dim(), g.n(), FFTW_FORWARD);
  const double scale = 1.0 / double(g.size());
  for (cplx& c : values) c *= scale;
  return SpectralField(g, std::move(values));
}

/// Pointwise product computed on the grid of the arguments. Exact (no
/// aliasing) when the arguments' combined spectral support fits the lattice.
inline SpectralField product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "product");
  std::vector<cplx> va = to_values(a);
  const std::vector<cplx> vb = to_values(b);
  for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return from_values(a.grid, std::move(va));
}

}  // namespace detail

/// L^2 norm by Parseval: (2 pi)^{d/2} times the l^2 norm of the coefficients.
inline double l2_norm(const SpectralField& F) {
  double s = 0.0;
  for (const cplx& c : F.coeffs) s += std::norm(c);
  return std::sqrt(F.grid.volume() * s);
}

}  // namespace fpm
