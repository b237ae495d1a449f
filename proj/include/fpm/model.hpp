#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fpm/fields.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

/// Parameters of  d_t rho + div(rho u) = nu Lap rho,  u = c_K Lambda^{alpha-d} grad rho.
///
/// `b = -(alpha - d)/2` is the order of the negative power Lambda^{-2b}
/// carried by the velocity. `mu > 0` replaces |k|^{-2b} by
/// |k|^{-2b} chi(mu |k|).
struct ModelParams {
  double alpha_minus_d = -1.0;
  double b = 0.5;
  double c_K = -1.0;
  double nu = 0.0;
  double mu = 0.0;
  CutoffSpec cutoff = CutoffSpec::bump();

  static ModelParams make(double alpha_minus_d, double c_K, double nu, double mu = 0.0,
                          CutoffSpec cutoff = CutoffSpec::bump()) {
    if (!(alpha_minus_d >= -2.0 && alpha_minus_d <= 0.0))
      throw std::invalid_argument("ModelParams: alpha_minus_d must lie in [-2, 0]");
    if (!std::isfinite(c_K)) throw std::invalid_argument("ModelParams: c_K must be finite");
    if (!(nu >= 0.0)) throw std::invalid_argument("ModelParams: nu must be >= 0");
    if (!(mu >= 0.0)) throw std::invalid_argument("ModelParams: mu must be >= 0");
    ModelParams p;
    p.alpha_minus_d = alpha_minus_d;
    p.b = -alpha_minus_d / 2.0;
    p.c_K = c_K;
    p.nu = nu;
    p.mu = mu;
    p.cutoff = std::move(cutoff);
    return p;
  }

  /// |k|^{-2b} chi(mu |k|) at |k| = r > 0 (the chi factor is dropped when mu = 0).
  double potential_symbol(double r) const {
    const double base = std::pow(r, -2.0 * b);
    return mu == 0.0 ? base : base * cutoff.chi(mu * r);
  }
};

// ---------------------------------------------------------------------------
// Initial data

struct CosinePerturbation {
  double mean = 1.0;
  double amplitude = 0.1;
  Wave k{1, 0};
};

/// Periodized Gaussian of total mass `mass`.
struct GaussianBump {
  double mass = 1.0;
  double width = 0.5;
  Vec2 center{std::numbers::pi, std::numbers::pi};
};

/// mean + random fluctuation with |c_k| ~ exp(-decay |k|) on the dealiased
/// band. Coefficients depend only on (seed, k), so every resolution sees the
/// same function up to its band. The fluctuation is scaled so that its
/// coefficient l1 norm is amplitude * mean, which keeps the field >= (1 - amplitude) * mean.
struct SpectralRandom {
  std::uint64_t seed = 1;
  double decay = 0.5;
  double mean = 1.0;
  double amplitude = 0.3;
};

using InitialCondition = std::variant<CosinePerturbation, GaussianBump, SpectralRandom>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in (0, 1], a pure function of its arguments.
inline double hashed_uniform(std::uint64_t seed, int k0, int k1, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ std::uint64_t(std::int64_t(k0)));
  h = splitmix64(h ^ (std::uint64_t(std::int64_t(k1)) << 1));
  h = splitmix64(h ^ (stream * 0x632be59bd9b4e019ULL));
  return (double(h >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard complex Gaussian attached to lattice point k (Box-Muller).
inline cplx hashed_gaussian(std::uint64_t seed, const Wave& k, std::uint64_t stream) {
  const double u1 = hashed_uniform(seed, k[0], k[1], 2 * stream);
  const double u2 = hashed_uniform(seed, k[0], k[1], 2 * stream + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

/// True for one representative of each pair {k, -k}, k != 0.
inline bool upper_half(const Wave& k) { return k[0] > 0 || (k[0] == 0 && k[1] > 0); }

/// Reference half-width used to normalize SpectralRandom independently of N.
inline constexpr int kRandomReferenceBand = 64;

}  // namespace detail

inline SpectralField initial_coefficients(const InitialCondition& ic, const TorusGrid& grid) {
  SpectralField F(grid);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CosinePerturbation>) {
          F.set({0, 0}, v.mean);
          if (v.k[0] == 0 && v.k[1] == 0) {
            F.set({0, 0}, v.mean + v.amplitude);
          } else {
            if (!grid.index_of(v.k) || !grid.index_of({-v.k[0], -v.k[1]}))
              throw std::invalid_argument("cosine initial data: wavevector outside the lattice");
            F.set_hermitian(v.k, 0.5 * v.amplitude);
          }
        } else if constexpr (std::is_same_v<T, GaussianBump>) {
          if (!(v.mass > 0.0) || !(v.width > 0.0)) throw std::invalid_argument("gaussian initial data: mass and width must be positive");
          for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
            if (grid.is_nyquist(i)) continue;
            const Vec2 k = grid.wavevector(i);
            const double amp = v.mass / grid.volume() * std::exp(-0.5 * v.width * v.width * dot(k, k));
            F.coeffs[i] = std::polar(amp, -dot(k, v.center));
          }
        } else {
          if (!(v.decay > 0.0)) throw std::invalid_argument("random initial data: decay must be positive");
          if (!(v.amplitude >= 0.0 && v.amplitude < 1.0)) throw std::invalid_argument("random initial data: amplitude must lie in [0, 1)");
          const int R = detail::kRandomReferenceBand;
          const int r1 = grid.dim() == 2 ? R : 0;
          double l1 = 0.0;
          for (int a = -R; a <= R; ++a)
            for (int c = -r1; c <= r1; ++c) {
              const Wave k{a, c};
              if (!detail::upper_half(k)) continue;
              l1 += 2.0 * std::abs(detail::hashed_gaussian(v.seed, k, 0)) * std::exp(-v.decay * norm(to_vec(k)));
            }
          F.set({0, 0}, v.mean);
          const double scale = l1 > 0.0 ? v.amplitude * v.mean / l1 : 0.0;
          for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
            const Wave k = grid.wave(i);
            if (!detail::upper_half(k) || !in_dealias_band(k, grid.n())) continue;
            F.set_hermitian(k, scale * detail::hashed_gaussian(v.seed, k, 0) * std::exp(-v.decay * norm(to_vec(k))));
          }
        }
      },
      ic);
  return F;
}

inline RealField make_initial(const InitialCondition& ic, const TorusGrid& grid) {
  return inverse_transform(initial_coefficients(ic, grid));
}

// ---------------------------------------------------------------------------
// Right-hand side

/// Multiplier of velocity component `axis`: c_K |k|^{-2b} chi(mu|k|) i k_axis.
inline MultiplierSpec velocity_multiplier(const ModelParams& p, int axis) {
  return {[p, axis](const Vec2& k) { return cplx(0.0, p.c_K * p.potential_symbol(norm(k)) * k[std::size_t(axis)]); }, cplx(0.0)};
}

/// Velocity coefficients, one SpectralField per component.
inline std::vector<SpectralField> velocity_coefficients(const SpectralField& rho_hat, const ModelParams& p) {
  std::vector<SpectralField> u;
  for (int axis = 0; axis < rho_hat.grid.dim(); ++axis) u.push_back(apply_multiplier(rho_hat, velocity_multiplier(p, axis)));
  return u;
}

/// u = c_K Lambda^{alpha-d} grad rho (regularized when mu > 0), in physical space.
inline std::vector<RealField> velocity(const SpectralField& rho_hat, const ModelParams& p) {
  std::vector<RealField> u;
  for (const SpectralField& c : velocity_coefficients(rho_hat, p)) u.push_back(inverse_transform(c));
  return u;
}

namespace detail {

/// Coefficients of div(rho u) from coefficient inputs. Both factors are
/// dealiased, the product is formed on the grid, and the result is projected
/// onto the dealiased band, which makes it the exact Galerkin truncation of
/// the convolution.
inline SpectralField divergence_of_product(const SpectralField& rho_hat, std::span<const SpectralField> u_hat) {
  const TorusGrid& g = rho_hat.grid;
  if (int(u_hat.size()) != g.dim()) throw std::invalid_argument("flux: velocity must have d components");
  const std::vector<cplx> rho_vals = to_values(dealias(rho_hat));
  SpectralField out(g);
  for (int axis = 0; axis < g.dim(); ++axis) {
    require_same_grid(g, u_hat[std::size_t(axis)].grid, "flux");
    std::vector<cplx> vals = to_values(dealias(u_hat[std::size_t(axis)]));
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = rho_vals[i].real() * vals[i].real();
    const SpectralField flux = from_values(g, std::move(vals));
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
      out.coeffs[i] += cplx(0.0, g.wavevector(i)[std::size_t(axis)]) * flux.coeffs[i];
  }
  out = dealias(out);
  out.coeffs[0] = 0.0;
  return out;
}

inline void require_finite(const SpectralField& F, const char* where) {
  if (!F.finite()) throw std::domain_error(std::string(where) + ": non-finite coefficients");
}

}  // namespace detail

/// Coefficients of div(rho u) for physical-space inputs on one grid.
inline SpectralField flux_divergence(const RealField& rho, std::span<const RealField> u) {
  std::vector<SpectralField> u_hat;
  for (const RealField& c : u) {
    require_same_grid(rho.grid, c.grid, "flux_divergence");
    u_hat.push_back(forward_transform(c));
  }
  return detail::divergence_of_product(forward_transform(rho), u_hat);
}

/// -(div(rho u))^ with u from rho_hat. Diffusion is not included; the time
/// stepper applies it through the integrating factor.
inline SpectralField nonlinear_rhs(const SpectralField& rho_hat, const ModelParams& p) {
  detail::require_finite(rho_hat, "nonlinear_rhs");
  const SpectralField rho_d = dealias(rho_hat);
  const std::vector<SpectralField> u_hat = velocity_coefficients(rho_d, p);
  SpectralField out = detail::divergence_of_product(rho_d, u_hat);
  out *= -1.0;
  return out;
}

/// -(div(rho u))^ with a prescribed velocity (the frozen-velocity transport
/// used by the Picard iteration).
inline SpectralField transport_rhs(const SpectralField& rho_hat, std::span<const SpectralField> u_hat) {
  detail::require_finite(rho_hat, "transport_rhs");
  SpectralField out = detail::divergence_of_product(rho_hat, u_hat);
  out *= -1.0;
  return out;
}

/// Heat-kernel mollifier exp(-mu^2 |k|^2 / 2); identity at mu = 0.
inline MultiplierSpec mollifier(double mu) {
  return {[mu](const Vec2& k) { return cplx(std::exp(-0.5 * mu * mu * dot(k, k))); }, cplx(1.0)};
}

/// Convolution with a nonnegative unit-mass kernel at scale mu (the periodized
/// heat kernel at time mu^2/2). Mean is preserved exactly.
inline RealField mollify_initial(const RealField& rho0, double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("mollify_initial: mu must be >= 0");
  if (mu == 0.0) return rho0;
  return inverse_transform(apply_multiplier(forward_transform(rho0), mollifier(mu)));
}

}  // namespace fpm
