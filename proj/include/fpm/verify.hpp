#pragma once

// Desk-scale checks of the analytic estimates behind the a priori bounds.
// Each estimate  lhs <= C * rhs  is sampled and the empirical constant is
// reported as the supremum of lhs / rhs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpm/diagnostics.hpp"
#include "fpm/model.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

struct RatioSample {
  Vec2 xi{};
  Vec2 eta{};
  std::string label;  // used by field-based samples instead of (xi, eta)
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// rhs vanished; the sample carries no information about the constant.
  bool degenerate = false;
};

namespace detail {

/// lhs / rhs with 0/0 -> 0. A vanishing rhs flags the sample degenerate; a
/// nonzero lhs there (beyond round-off of `scale`) yields +inf.
inline RatioSample make_ratio(double lhs, double rhs, double scale) {
  RatioSample r;
  r.lhs = lhs;
  r.rhs = rhs;
  if (rhs > 0.0) {
    r.ratio = lhs / rhs;
  } else {
    r.degenerate = true;
    r.ratio = lhs <= 1e-12 * scale ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r;
}

/// (1+q)^a - 1 - a q for q > -1.
inline double binomial_remainder(double a, double q) {
  if (std::abs(q) >= 0.1) return std::pow(1.0 + q, a) - 1.0 - a * q;
  double coef = a, term = 0.0, sum = 0.0, qn = q;
  for (int n = 2; n < 200; ++n) {
    coef *= (a - n + 1) / n;
    qn *= q;
    term = coef * qn;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace detail

/// | |xi|^s - |xi-eta|^s - |eta|^s - s eta.(xi-eta) |eta|^{s-2} |
///   against  |xi-eta|^2 |eta|^{s-2} + |eta| |xi-eta|^{s-1}.
inline RatioSample lemma1_gap(const Vec2& xi, const Vec2& eta, double s) {
  if (!(s >= 3.0)) throw std::invalid_argument("lemma1_gap: requires s >= 3");
  const Vec2 h = xi - eta;
  const double x2 = dot(xi, xi), e2 = dot(eta, eta), d2 = dot(h, h);
  const double ne = std::sqrt(e2), nd = std::sqrt(d2);
  const double a = std::pow(x2, s / 2), bb = std::pow(d2, s / 2), c = std::pow(e2, s / 2);
  const double lin = s * dot(eta, h) * std::pow(e2, s / 2 - 1.0);
  double gap = a - bb - c - lin;
  // Expand |xi|^s around the larger of |eta|, |xi-eta| to avoid the
  // cancellation of the direct form.
  if (ne > 0.0 && ne >= nd) {
    const double q = (2.0 * dot(eta, h) + d2) / e2;
    gap = c * (detail::binomial_remainder(s / 2.0, q) + 0.5 * s * d2 / e2) - bb;
  } else if (nd > 0.0) {
    const double q = (2.0 * dot(eta, h) + e2) / d2;
    gap = bb * (detail::binomial_remainder(s / 2.0, q) + 0.5 * s * q) - c - lin;
  }
  const double lhs = std::abs(gap);
  const double rhs = d2 * std::pow(e2, s / 2 - 1.0) + ne * std::pow(nd, s - 1.0);
  RatioSample r = detail::make_ratio(lhs, rhs, a + bb + c + std::abs(lin));
  r.xi = xi;
  r.eta = eta;
  return r;
}

/// | |xi|^b - |eta|^b |  against  |xi - eta| max(|xi|^{b-1}, |eta|^{b-1}).
inline RatioSample bdiff_check(const Vec2& xi, const Vec2& eta, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("bdiff_check: b must lie in (0, 1]");
  const double nx = norm(xi), ne = norm(eta);
  if (nx == 0.0 || ne == 0.0) throw std::invalid_argument("bdiff_check: zero wavevector");
  const double lhs = std::abs(std::pow(nx, b) - std::pow(ne, b));
  const double rhs = norm(xi - eta) * std::max(std::pow(nx, b - 1.0), std::pow(ne, b - 1.0));
  RatioSample r = detail::make_ratio(lhs, rhs, std::pow(nx, b) + std::pow(ne, b));
  r.xi = xi;
  r.eta = eta;
  return r;
}

/// Remainder of the kernel split  G = G_0 + G_1 + G_s + (G - G_0 - G_1 - G_s)  with
///   G   = |xi|^{2s} xi.eta |eta|^{-2b}
///   G_s = |xi|^s |xi-eta|^s xi.eta |eta|^{-2b}
///   G_0 = |xi|^s |eta|^s xi.eta |eta|^{-2b}
///   G_1 = |xi|^s (s eta.(xi-eta)) (xi.eta) |eta|^{s-2-2b}
/// against (|xi-eta|^2 |eta|^{s-2} + |eta| |xi-eta|^{s-1}) |xi|^s |eta|^{1-2b} (|xi-eta| + |eta|).
inline RatioSample gdecomp_check(const Vec2& xi, const Vec2& eta, double s, double b) {
  if (!(s >= 3.0)) throw std::invalid_argument("gdecomp_check: requires s >= 3");
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("gdecomp_check: b must lie in [0, 1]");
  const double nx = norm(xi), ne = norm(eta), nd = norm(xi - eta);
  if (ne == 0.0) throw std::invalid_argument("gdecomp_check: eta must be nonzero");
  const double xe = dot(xi, eta);
  const double pe = std::pow(ne, -2.0 * b);
  const double xs = std::pow(nx, s);
  const double G = xs * xs * xe * pe;
  const double Gs = xs * std::pow(nd, s) * xe * pe;
  const double G0 = xs * std::pow(ne, s) * xe * pe;
  const double G1 = xs * (s * dot(eta, xi - eta)) * xe * std::pow(ne, s - 2.0 - 2.0 * b);
  const double lhs = std::abs(G - G0 - G1 - Gs);
  const double rhs = (nd * nd * std::pow(ne, s - 2.0) + ne * std::pow(nd, s - 1.0)) * xs * std::pow(ne, 1.0 - 2.0 * b) * (nd + ne);
  RatioSample r = detail::make_ratio(lhs, rhs, std::abs(G) + std::abs(G0) + std::abs(G1) + std::abs(Gs));
  r.xi = xi;
  r.eta = eta;
  return r;
}

// ---------------------------------------------------------------------------
// Commutator estimates

namespace detail {

struct CommutatorTerms {
  double plain = 0.0;      // || [Lambda^{-b}, f grad] g ||
  double corrected = 0.0;  // || ([Lambda^{-b}, f grad] - b (grad f . grad) Lambda^{-b-2} grad) g ||
  SpectralField f;         // on the padded lattice
  SpectralField g;
};

/// Evaluates the commutators exactly for trigonometric polynomials f, g: both
/// are moved to a lattice of 2N + 2 modes, wide enough that every product
/// below is alias-free.
inline CommutatorTerms commutator_terms(const SpectralField& f_hat, const SpectralField& g_hat, double b) {
  require_same_grid(f_hat.grid, g_hat.grid, "commutator");
  if (std::abs(g_hat.coeffs[0]) > 1e-12 * std::max(1.0, g_hat.max_abs()))
    throw std::invalid_argument("commutator: g must have zero mean");
  const int padded_n = 2 * f_hat.grid.n() + 2;
  CommutatorTerms out{0.0, 0.0, resample(f_hat, padded_n), resample(g_hat, padded_n)};
  const int d = f_hat.grid.dim();
  const MultiplierSpec neg_b = fractional_power(-b);
  const MultiplierSpec neg_b2 = fractional_power(-b - 2.0);
  const SpectralField lam_g = apply_multiplier(out.g, neg_b);
  double plain_sq = 0.0, corrected_sq = 0.0;
  for (int j = 0; j < d; ++j) {
    const SpectralField dg = apply_multiplier(out.g, partial(j));
    const SpectralField a = apply_multiplier(product(out.f, dg), neg_b);
    const SpectralField bterm = product(out.f, apply_multiplier(lam_g, partial(j)));
    SpectralField comm = a - bterm;
    const SpectralField inner = apply_multiplier(dg, neg_b2);
    SpectralField principal(out.f.grid);
    for (int k = 0; k < d; ++k)
      principal += product(apply_multiplier(out.f, partial(k)), apply_multiplier(inner, partial(k)));
    principal *= b;
    const SpectralField rem = comm - principal;
    const double pc = l2_norm(comm), rc = l2_norm(rem);
    plain_sq += pc * pc;
    corrected_sq += rc * rc;
  }
  out.plain = std::sqrt(plain_sq);
  out.corrected = std::sqrt(corrected_sq);
  return out;
}

inline double default_eps() { return 0.5; }

}  // namespace detail

/// || ([Lambda^{-b}, f grad] - b (grad f . grad) Lambda^{-b-2} grad) g ||_{L^2}
///   against  ||f||_{H^{d/2+3+eps}} ||g||_{H^{-b-1}}.
inline RatioSample commutator_ratio(const SpectralField& f_hat, const SpectralField& g_hat, double b, double eps = 0.5) {
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("commutator_ratio: b must lie in (0, 1)");
  const auto terms = detail::commutator_terms(f_hat, g_hat, b);
  const double d = f_hat.grid.dim();
  const double rhs = sobolev_norm(terms.f, d / 2.0 + 3.0 + eps, false) * sobolev_norm(terms.g, -b - 1.0, false);
  return detail::make_ratio(terms.corrected, rhs, 1.0);
}

inline RatioSample commutator_ratio(const RealField& f, const RealField& g, double b, double eps = 0.5) {
  return commutator_ratio(forward_transform(f), forward_transform(g), b, eps);
}

/// || [Lambda^{-b}, f grad] g ||_{L^2}  against  ||f||_{H^{d/2+1-b+eps}} ||g||_{H^{-b}}.
inline RatioSample plain_commutator_ratio(const SpectralField& f_hat, const SpectralField& g_hat, double b, double eps = 0.5) {
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("plain_commutator_ratio: b must lie in (0, 1)");
  const auto terms = detail::commutator_terms(f_hat, g_hat, b);
  const double d = f_hat.grid.dim();
  const double rhs = sobolev_norm(terms.f, d / 2.0 + 1.0 - b + eps, false) * sobolev_norm(terms.g, -b, false);
  return detail::make_ratio(terms.plain, rhs, 1.0);
}

inline RatioSample plain_commutator_ratio(const RealField& f, const RealField& g, double b, double eps = 0.5) {
  return plain_commutator_ratio(forward_transform(f), forward_transform(g), b, eps);
}

// ---------------------------------------------------------------------------
// Sampling and reports

enum class Sampler { lattice, log_rays, mixed };

inline Sampler sampler_from_string(const std::string& s) {
  if (s == "lattice") return Sampler::lattice;
  if (s == "log_rays") return Sampler::log_rays;
  if (s == "mixed") return Sampler::mixed;
  throw std::invalid_argument("unknown sampler '" + s + "' (expected lattice, log_rays or mixed)");
}

struct VerifyReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t degenerate = 0;
  double sup_ratio = 0.0;
  RatioSample argmax;
  std::vector<std::pair<double, double>> quantiles;  // (level, value)
  double first_half_sup = 0.0;
  double second_half_sup = 0.0;
  /// Optional absolute bound on the sup ratio (used by the cancellation check).
  std::optional<double> bound;
  bool pass = false;
};

/// Sup, quantiles and the stability verdict over non-degenerate samples:
/// pass iff the sup is finite, the sup over the second half of the samples is
/// at most twice that over the first half, and any absolute bound holds.
inline VerifyReport summarize(std::string name, std::span<const RatioSample> samples, std::optional<double> bound = std::nullopt) {
  VerifyReport rep;
  rep.name = std::move(name);
  rep.samples = samples.size();
  rep.bound = bound;
  std::vector<double> ratios;
  const std::size_t half = samples.size() / 2;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const RatioSample& s = samples[i];
    if (s.degenerate) {
      ++rep.degenerate;
      continue;
    }
    ratios.push_back(s.ratio);
    if (i < half) rep.first_half_sup = std::max(rep.first_half_sup, s.ratio);
    else rep.second_half_sup = std::max(rep.second_half_sup, s.ratio);
    if (s.ratio > rep.sup_ratio || ratios.size() == 1) {
      rep.sup_ratio = s.ratio;
      rep.argmax = s;
    }
  }
  std::sort(ratios.begin(), ratios.end());
  for (double level : {0.5, 0.9, 0.99, 1.0}) {
    double v = 0.0;
    if (!ratios.empty()) {
      const double rank = std::max(1.0, std::ceil(level * double(ratios.size())));  // nearest rank
      v = ratios[std::min(ratios.size(), std::size_t(rank)) - 1];
    }
    rep.quantiles.emplace_back(level, v);
  }
  const bool finite = std::isfinite(rep.sup_ratio);
  const bool stable = rep.second_half_sup <= 2.0 * rep.first_half_sup;
  rep.pass = finite && stable && (!bound || rep.sup_ratio <= *bound);
  return rep;
}

namespace detail {

class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, 1).
  double next() { return double(gen_() >> 11) * 0x1.0p-53; }
  double log_uniform(double lo, double hi) { return lo * std::exp(next() * std::log(hi / lo)); }
  int integer(int lo, int hi) { return lo + int(next() * double(hi - lo + 1)); }
  Vec2 direction(int d) {
    if (d == 1) return {next() < 0.5 ? -1.0 : 1.0, 0.0};
    const double th = 2.0 * std::numbers::pi * next();
    return {std::cos(th), std::sin(th)};
  }

 private:
  std::mt19937_64 gen_;
};

inline Vec2 rotate(const Vec2& v, double angle) {
  return {std::cos(angle) * v[0] - std::sin(angle) * v[1], std::sin(angle) * v[0] + std::cos(angle) * v[1]};
}

inline Vec2 lattice_point(UnitRng& rng, int d) {
  const double cap = d == 1 ? 1000.0 : 707.0;
  const int m = int(rng.log_uniform(1.0, cap + 1.0));
  Vec2 v{double(rng.integer(-m, m)), 0.0};
  if (d == 2) v[1] = double(rng.integer(-m, m));
  return v;
}

inline Vec2 log_ray_point(UnitRng& rng, int d) { return rng.log_uniform(1e-2, 1e3) * rng.direction(d); }

/// Near-collinear pairs and pairs with |eta|/|xi| in {1e-3, 1e3}.
inline std::pair<Vec2, Vec2> adversarial_pair(UnitRng& rng, int d) {
  const Vec2 xi = log_ray_point(rng, d);
  const double pick = rng.next();
  if (pick < 0.5) {
    const double stretch = 1.0 + (rng.next() < 0.5 ? -1.0 : 1.0) * rng.log_uniform(1e-4, 1e-1);
    Vec2 eta = stretch * xi;
    if (d == 2) eta = rotate(eta, (rng.next() < 0.5 ? -1.0 : 1.0) * rng.log_uniform(1e-4, 1e-1));
    return {xi, eta};
  }
  const double scale = pick < 0.75 ? 1e-3 : 1e3;
  return {xi, scale * norm(xi) * rng.direction(d)};
}

}  // namespace detail

/// Deterministic stream of (xi, eta) pairs. `mixed` draws 40% lattice pairs
/// (|xi|, |eta| <= 1e3), 40% log-uniform radii in [1e-2, 1e3] with uniform
/// directions, and 20% adversarial pairs.
inline std::vector<std::pair<Vec2, Vec2>> sample_pairs(int d, std::size_t n, Sampler sampler, std::uint64_t seed) {
  if (d != 1 && d != 2) throw std::invalid_argument("sample_pairs: dimension must be 1 or 2");
  detail::UnitRng rng(seed);
  std::vector<std::pair<Vec2, Vec2>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sampler kind = sampler;
    bool adversarial = false;
    if (sampler == Sampler::mixed) {
      const double u = rng.next();
      kind = u < 0.4 ? Sampler::lattice : Sampler::log_rays;
      adversarial = u >= 0.8;
    }
    if (adversarial) {
      out.push_back(detail::adversarial_pair(rng, d));
    } else if (kind == Sampler::lattice) {
      const Vec2 a = detail::lattice_point(rng, d);
      out.emplace_back(a, detail::lattice_point(rng, d));
    } else {
      const Vec2 a = detail::log_ray_point(rng, d);
      out.emplace_back(a, detail::log_ray_point(rng, d));
    }
  }
  return out;
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline VerifyReport sample_lemma1(double s, int d, std::size_t n, Sampler sampler = Sampler::mixed, std::uint64_t seed = 1) {
  if (!(s >= 3.0)) throw std::invalid_argument("sample_lemma1: requires s >= 3");
  std::vector<RatioSample> samples;
  samples.reserve(n);
  for (const auto& [xi, eta] : sample_pairs(d, n, sampler, seed)) samples.push_back(lemma1_gap(xi, eta, s));
  return summarize("lemma1 s=" + format_number(s) + " d=" + std::to_string(d), samples);
}

inline VerifyReport sample_bdiff(double b, int d, std::size_t n, Sampler sampler = Sampler::mixed, std::uint64_t seed = 1) {
  std::vector<RatioSample> samples;
  samples.reserve(n);
  for (const auto& [xi, eta] : sample_pairs(d, n, sampler, seed)) {
    if (norm(xi) == 0.0 || norm(eta) == 0.0) continue;
    samples.push_back(bdiff_check(xi, eta, b));
  }
  return summarize("bdiff b=" + format_number(b) + " d=" + std::to_string(d), samples);
}

inline VerifyReport sample_gdecomp(double s, double b, int d, std::size_t n, Sampler sampler = Sampler::mixed, std::uint64_t seed = 1) {
  std::vector<RatioSample> samples;
  samples.reserve(n);
  for (const auto& [xi, eta] : sample_pairs(d, n, sampler, seed)) {
    if (norm(eta) == 0.0) continue;
    samples.push_back(gdecomp_check(xi, eta, s, b));
  }
  return summarize("gdecomp s=" + format_number(s) + " b=" + format_number(b) + " d=" + std::to_string(d), samples);
}

/// Random real trigonometric polynomial on the dealiased band with
/// |c_k| ~ (1 + |k|)^{-decay}. Coefficients depend only on (seed, stream, k),
/// so a finer grid extends the same draw.
inline SpectralField random_trig_field(const TorusGrid& grid, std::uint64_t seed, std::uint64_t stream, double decay,
                                       bool zero_mean) {
  SpectralField F(grid);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const Wave k = grid.wave(i);
    if (!detail::upper_half(k) || !in_dealias_band(k, grid.n())) continue;
    F.set_hermitian(k, detail::hashed_gaussian(seed, k, stream) * std::pow(1.0 + norm(to_vec(k)), -decay));
  }
  if (!zero_mean) F.coeffs[0] = detail::hashed_gaussian(seed, {0, 0}, stream).real();
  return F;
}

struct CommutatorCampaign {
  double b = 0.5;
  int dim = 1;
  int n = 64;
  std::size_t trials = 200;
  double eps = 0.5;
  std::uint64_t seed = 1;
  bool plain = false;  // true: the uncorrected commutator estimate
};

/// Random smooth f (coefficients decaying like (1+|k|)^{-(d+4)}) and mean-zero
/// g with per-trial roughness (1+|k|)^{-p}, p in [0, 2].
inline VerifyReport sample_commutator(const CommutatorCampaign& c) {
  const TorusGrid grid(c.dim, c.n);
  std::vector<RatioSample> samples;
  for (std::size_t trial = 0; trial < c.trials; ++trial) {
    const std::uint64_t ts = detail::splitmix64(c.seed + 0x1000 * trial);
    const double p = 2.0 * detail::hashed_uniform(ts, 0, 0, 99);
    const SpectralField f = random_trig_field(grid, ts, 1, double(c.dim) + 4.0, false);
    const SpectralField g = random_trig_field(grid, ts, 2, p, true);
    RatioSample r = c.plain ? plain_commutator_ratio(f, g, c.b, c.eps) : commutator_ratio(f, g, c.b, c.eps);
    r.label = "trial=" + std::to_string(trial) + " g_decay=" + format_number(p);
    samples.push_back(std::move(r));
  }
  const std::string kind = c.plain ? "plain_commutator" : "commutator";
  return summarize(kind + " b=" + format_number(c.b) + " d=" + std::to_string(c.dim) + " N=" + std::to_string(c.n) +
                       " eps=" + format_number(c.eps),
                   samples);
}

// ---------------------------------------------------------------------------
// Trilinear cancellation

/// Real anti-symmetric kernels, G(eta, xi) = -G(xi, eta).
inline std::vector<TrilinearKernel> antisymmetric_kernels(double s = 3.0, double b = 0.5) {
  std::vector<TrilinearKernel> ks;
  ks.push_back({"xi.eta(|xi|^2-|eta|^2)",
                [](const Vec2& x, const Vec2& e) { return dot(x, e) * (dot(x, x) - dot(e, e)); }, {}});
  ks.push_back({"|xi|^a|eta|^a(|xi|^b-|eta|^b)xi.eta",
                [s, b](const Vec2& x, const Vec2& e) {
                  const double a = s - 1.5 * b;
                  return std::pow(norm(x), a) * std::pow(norm(e), a) * (std::pow(norm(x), b) - std::pow(norm(e), b)) * dot(x, e);
                },
                {}});
  ks.push_back({"|xi|^{s-b}|eta|^{s-b}(xi+eta).(xi-eta)",
                [s, b](const Vec2& x, const Vec2& e) {
                  return std::pow(norm(x), s - b) * std::pow(norm(e), s - b) * dot(x + e, x - e);
                },
                {}});
  ks.push_back({"|xi|^s|eta|^s(xi+eta).(xi-eta)|xi-eta|^{-2b}",
                [s, b](const Vec2& x, const Vec2& e) {
                  const double nd = norm(x - e);
                  if (nd == 0.0) return 0.0;
                  return std::pow(norm(x), s) * std::pow(norm(e), s) * dot(x + e, x - e) * std::pow(nd, -2.0 * b);
                },
                {}});
  ks.push_back({"atan|xi|-atan|eta|", [](const Vec2& x, const Vec2& e) { return std::atan(norm(x)) - std::atan(norm(e)); }, {}});
  return ks;
}

/// |T[G]| / (sum |G||c||c||c|) over random real fields and the anti-symmetric
/// kernels; passes when every ratio is at most `tolerance`.
inline VerifyReport sample_antisymmetry(int d, int n, std::size_t fields, std::uint64_t seed, double tolerance = 1e-10) {
  const TorusGrid grid(d, n);
  std::vector<RatioSample> samples;
  const auto kernels = antisymmetric_kernels();
  for (std::size_t f = 0; f < fields; ++f) {
    const SpectralField F = random_trig_field(grid, detail::splitmix64(seed + f), 7, 1.0, false);
    for (const TrilinearKernel& G : kernels) {
      const TrilinearSum t = trilinear_naive(G, F);
      RatioSample r = detail::make_ratio(std::abs(t.value), t.scale, 1.0);
      r.label = "field=" + std::to_string(f) + " kernel=" + G.name;
      samples.push_back(std::move(r));
    }
  }
  return summarize("antisymmetry d=" + std::to_string(d) + " N=" + std::to_string(n), samples, tolerance);
}

/// Structured text block for one report.
inline std::string to_text(const VerifyReport& r) {
  std::ostringstream os;
  os << "[" << r.name << "]\n";
  os << "samples = " << r.samples << "\n";
  os << "degenerate = " << r.degenerate << "\n";
  os << "sup_ratio = " << format_number(r.sup_ratio) << "\n";
  if (!r.argmax.label.empty()) {
    os << "argmax = " << r.argmax.label << "\n";
  } else {
    os << "argmax = xi=(" << format_number(r.argmax.xi[0]) << ", " << format_number(r.argmax.xi[1]) << ") eta=("
       << format_number(r.argmax.eta[0]) << ", " << format_number(r.argmax.eta[1]) << ")\n";
  }
  for (const auto& [level, value] : r.quantiles) {
    std::ostringstream q;
    q << level;
    os << "q" << q.str() << " = " << format_number(value) << "\n";
  }
  os << "first_half_sup = " << format_number(r.first_half_sup) << "\n";
  os << "second_half_sup = " << format_number(r.second_half_sup) << "\n";
  if (r.bound) os << "bound = " << format_number(*r.bound) << "\n";
  os << "pass = " << (r.pass ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace fpm
