#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpm/diagnostics.hpp"
#include "fpm/model.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

/// Non-finite state produced by a step.
class BlowupSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DtPolicy { fixed, adaptive };

struct StepperConfig {
  DtPolicy dt_policy = DtPolicy::fixed;
  double dt = 1e-3;        // fixed policy
  double safety = 0.5;     // adaptive policy, in (0, 1]
  double dt_max = 1e-2;    // adaptive policy cap
  double t_end = 1.0;
  long max_steps = 10'000'000;
  double blowup_threshold = 1e8;  // abort once B1 exceeds this
  int sample_every = 10;          // steps between diagnostics samples
  std::vector<double> s_list{1.0, 3.0};
  /// Project the initial coefficients onto the dealiased band.
  bool project_initial = true;

  void validate() const {
    if (!(t_end > 0.0)) throw std::invalid_argument("StepperConfig: t_end must be positive");
    if (dt_policy == DtPolicy::fixed && !(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
    if (dt_policy == DtPolicy::adaptive && !(safety > 0.0 && safety <= 1.0))
      throw std::invalid_argument("StepperConfig: safety must lie in (0, 1]");
    if (dt_policy == DtPolicy::adaptive && !(dt_max > 0.0)) throw std::invalid_argument("StepperConfig: dt_max must be positive");
    if (max_steps < 1) throw std::invalid_argument("StepperConfig: max_steps must be >= 1");
    if (sample_every < 1) throw std::invalid_argument("StepperConfig: sample_every must be >= 1");
    if (s_list.empty()) throw std::invalid_argument("StepperConfig: s_list must be nonempty");
    if (!(blowup_threshold > 0.0)) throw std::invalid_argument("StepperConfig: blowup_threshold must be positive");
  }
};

inline constexpr double kCflEpsilon = 1e-12;

/// safety * min( dx / (eps + max|u|), dx^{max(1, 2-2b)} / (eps + |c_K| max|rho|) ),
/// capped at dt_max. Diffusion does not enter; the integrating factor treats it exactly.
inline double cfl_dt(const SpectralField& state, const ModelParams& p, double safety,
                     double dt_max = std::numeric_limits<double>::infinity()) {
  if (!state.finite()) throw std::domain_error("cfl_dt: non-finite state");
  const TorusGrid& g = state.grid;
  const SpectralField rho_d = dealias(state);
  const std::vector<RealField> u = velocity(rho_d, p);
  double umax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (const RealField& c : u) s += c.values[i] * c.values[i];
    umax = std::max(umax, std::sqrt(s));
  }
  const double rho_max = inverse_transform(rho_d).max_abs();
  const double dx = g.dx();
  const double transport = dx / (kCflEpsilon + umax);
  const double order = std::max(1.0, 2.0 - 2.0 * p.b);
  const double nonlocal = std::pow(dx, order) / (kCflEpsilon + std::abs(p.c_K) * rho_max);
  return std::min(safety * std::min(transport, nonlocal), dt_max);
}

/// One integrating-factor RK4 (Lawson) step for  d_t c = -nu|k|^2 c + N(t, c).
/// With N == 0 the step is exactly multiplication by exp(-nu |k|^2 dt).
template <class Rhs>
SpectralField ifrk4_step(const SpectralField& u, double t, double dt, double nu, Rhs&& rhs) {
  const TorusGrid& g = u.grid;
  std::vector<double> E(g.size()), E2(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 k = g.wavevector(i);
    E[i] = std::exp(-nu * dot(k, k) * dt);
    E2[i] = std::exp(-nu * dot(k, k) * 0.5 * dt);
  }
  const std::size_t n = g.size();
  const SpectralField k1 = rhs(t, u);
  SpectralField a(g);
  for (std::size_t i = 0; i < n; ++i) a.coeffs[i] = E2[i] * (u.coeffs[i] + 0.5 * dt * k1.coeffs[i]);
  const SpectralField k2 = rhs(t + 0.5 * dt, a);
  for (std::size_t i = 0; i < n; ++i) a.coeffs[i] = E2[i] * u.coeffs[i] + 0.5 * dt * k2.coeffs[i];
  const SpectralField k3 = rhs(t + 0.5 * dt, a);
  for (std::size_t i = 0; i < n; ++i) a.coeffs[i] = E[i] * u.coeffs[i] + dt * E2[i] * k3.coeffs[i];
  const SpectralField k4 = rhs(t + dt, a);
  SpectralField out(g);
  for (std::size_t i = 0; i < n; ++i)
    out.coeffs[i] = E[i] * u.coeffs[i] +
                    dt / 6.0 * (E[i] * k1.coeffs[i] + 2.0 * E2[i] * (k2.coeffs[i] + k3.coeffs[i]) + k4.coeffs[i]);
  return out;
}

/// One IFRK4 step of the full model. Throws BlowupSignal on non-finite data.
inline SpectralField step(const SpectralField& state, double dt, const ModelParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (!state.finite()) throw BlowupSignal("step: non-finite input state");
  SpectralField out = [&] {
    try {
      return ifrk4_step(state, 0.0, dt, p.nu, [&](double, const SpectralField& c) { return nonlinear_rhs(c, p); });
    } catch (const std::domain_error& e) {
      throw BlowupSignal(e.what());
    }
  }();
  if (!out.finite()) throw BlowupSignal("step: non-finite state");
  return out;
}

enum class Termination { completed, blowup_detected, max_steps };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::max_steps: return "max_steps";
  }
  return "unknown";
}

struct FinalState {
  SpectralField state;
  double t = 0.0;
  long steps = 0;
  Termination reason = Termination::completed;
  std::string detail;
  DiagnosticsRecord last;
};

using SampleCallback = std::function<void(const DiagnosticsRecord&)>;

namespace detail {

/// Holds samples until enough neighbours exist to difference the energies
/// with a five-point stencil, then emits them in time order.
class EnergyWindow {
 public:
  EnergyWindow(const ModelParams& p, double energy_s, SampleCallback cb)
      : p_(p), s_(energy_s), cb_(std::move(cb)) {}

  void push(DiagnosticsRecord r, const SpectralField& state) {
    Entry e;
    e.t = r.t;
    e.energy_l2 = half_energy(state, std::nullopt);
    e.energy_hs = half_energy(state, s_);
    e.rate_l2 = energy_rate(state, p_, std::nullopt);
    e.rate_hs = energy_rate(state, p_, s_);
    e.record = std::move(r);
    entries_.push_back(std::move(e));
    // Entry k is emitted once entry max(k + 2, 4) exists.
    while (emitted_ < entries_.size() && entries_.size() >= std::max<std::size_t>(emitted_ + 3, kStencil)) emit_next();
  }

  void flush() {
    while (emitted_ < entries_.size()) emit_next();
  }

  const std::optional<DiagnosticsRecord>& last() const { return last_; }

 private:
  static constexpr std::size_t kStencil = 5;

  struct Entry {
    double t = 0.0;
    double energy_l2 = 0.0, energy_hs = 0.0, rate_l2 = 0.0, rate_hs = 0.0;
    DiagnosticsRecord record;
  };

  void emit_next() {
    const std::size_t k = emitted_;
    DiagnosticsRecord r = entries_[k].record;
    const std::size_t total = entries_.size();
    if (total >= 2) {
      const std::size_t width = std::min(kStencil, total);
      std::size_t lo = k >= width / 2 ? k - width / 2 : 0;
      lo = std::min(lo, total - width);
      std::vector<double> times;
      for (std::size_t j = lo; j < lo + width; ++j) times.push_back(entries_[j].t);
      const std::vector<double> w = derivative_weights(times, k - lo);
      double dl2 = 0.0, dhs = 0.0;
      for (std::size_t j = 0; j < width; ++j) {
        dl2 += w[j] * entries_[lo + j].energy_l2;
        dhs += w[j] * entries_[lo + j].energy_hs;
      }
      r.energy_residual_L2 = std::abs(dl2 - entries_[k].rate_l2);
      r.energy_residual_Hs = std::abs(dhs - entries_[k].rate_hs);
    }
    ++emitted_;
    last_ = r;
    if (cb_) cb_(r);
    // Keep the entries a later stencil can still touch.
    while (emitted_ > kStencil && entries_.size() > 2 * kStencil) {
      entries_.pop_front();
      --emitted_;
    }
  }

  ModelParams p_;
  double s_;
  SampleCallback cb_;
  std::deque<Entry> entries_;
  std::size_t emitted_ = 0;
  std::optional<DiagnosticsRecord> last_;
};

}  // namespace detail

/// Advances rho0 to cfg.t_end, or until blow-up is detected or max_steps is
/// exhausted. Diagnostics are sampled every cfg.sample_every steps and at the
/// final state, and handed to `on_sample` in time order.
inline FinalState integrate(const RealField& rho0, const ModelParams& p, const StepperConfig& cfg,
                            const SampleCallback& on_sample = {}) {
  cfg.validate();
  SpectralField state = forward_transform(rho0);
  if (cfg.project_initial) state = dealias(state);

  detail::EnergyWindow window(p, cfg.s_list.front(), on_sample);
  double int_b1 = 0.0, int_b2 = 0.0;
  double b1 = blowup_B1(state), b2 = blowup_B2(state);
  double t = 0.0;
  long steps = 0;

  auto sample = [&] {
    DiagnosticsRecord r = measure(t, state, cfg.s_list);
    r.int_B1 = int_b1;
    r.int_B2sq = int_b2;
    window.push(std::move(r), state);
  };

  FinalState result{state, 0.0, 0, Termination::completed, "", {}};
  sample();
  bool sampled_current = true;
  while (t < cfg.t_end) {
    if (steps >= cfg.max_steps) {
      result.reason = Termination::max_steps;
      result.detail = "max_steps reached at t=" + std::to_string(t);
      break;
    }
    double dt = cfg.dt_policy == DtPolicy::fixed ? cfg.dt : cfl_dt(state, p, cfg.safety, cfg.dt_max);
    const double remaining = cfg.t_end - t;
    const bool last = dt >= remaining * (1.0 - 1e-9);
    if (last) dt = remaining;

    SpectralField next(state.grid);
    try {
      next = step(state, dt, p);
    } catch (const BlowupSignal& e) {
      result.reason = Termination::blowup_detected;
      result.detail = e.what();
      break;
    }
    const double b1n = blowup_B1(next), b2n = blowup_B2(next);
    int_b1 += 0.5 * dt * (b1 + b1n);
    int_b2 += 0.5 * dt * (b2 + b2n);
    b1 = b1n;
    b2 = b2n;
    state = std::move(next);
    ++steps;
    t = last ? cfg.t_end : (cfg.dt_policy == DtPolicy::fixed ? double(steps) * cfg.dt : t + dt);
    sampled_current = false;

    if (!std::isfinite(b1) || b1 > cfg.blowup_threshold) {
      result.reason = Termination::blowup_detected;
      result.detail = "B1=" + std::to_string(b1) + " exceeded threshold at t=" + std::to_string(t);
      if (state.finite()) {
        sample();
        sampled_current = true;
      }
      break;
    }
    if (steps % cfg.sample_every == 0 || last) {
      sample();
      sampled_current = true;
    }
  }
  if (!sampled_current && state.finite()) sample();
  window.flush();
  result.state = state;
  result.t = t;
  result.steps = steps;
  if (window.last()) result.last = *window.last();
  return result;
}

}  // namespace fpm
