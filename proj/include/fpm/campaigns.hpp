#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpm/config.hpp"
#include "fpm/diagnostics.hpp"
#include "fpm/io.hpp"
#include "fpm/model.hpp"
#include "fpm/spectral.hpp"
#include "fpm/timestepping.hpp"
#include "fpm/verify.hpp"

namespace fpm {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitBlowup = 2,
  kExitCheckFailed = 3,
  kExitMaxSteps = 4,
};

inline int exit_code(Termination t) {
  switch (t) {
    case Termination::completed: return kExitOk;
    case Termination::blowup_detected: return kExitBlowup;
    case Termination::max_steps: return kExitMaxSteps;
  }
  return kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// Regimes

struct Regime {
  std::string name;  // case1 | case2 | outside
  std::vector<std::string> warnings;
};

inline Regime classify_regime(const ModelParams& p, const RealField& rho0) {
  Regime r;
  const double rho_min = *std::min_element(rho0.values.begin(), rho0.values.end());
  if (p.nu > 0.0) {
    r.name = "case2";
    if (p.b == 0.0 && p.c_K > 0.0)
      r.warnings.push_back("alpha_minus_d = 0 with c_K > 0: well-posedness needs ||rho0||_inf < c nu / c_K for an unknown "
                           "absolute constant c; smallness not checked (||rho0||_inf = " +
                           format_number(rho0.max_abs()) + ", nu / c_K = " + format_number(p.nu / p.c_K) + ")");
  } else if (p.c_K < 0.0) {
    r.name = "case1";
    if (rho_min < 0.0) r.warnings.push_back("initial data has negative values (min " + format_number(rho_min) + "); case 1 assumes rho0 >= 0");
  } else {
    r.name = "outside";
    r.warnings.push_back(p.c_K > 0.0 ? "c_K > 0 with nu = 0 is outside Theorem 1 hypotheses (attractive, inviscid)"
                                     : "c_K = 0 with nu = 0 is outside Theorem 1 hypotheses (no dynamics)");
  }
  return r;
}

inline void log_regime(std::ostream& log, const Regime& r) {
  log << "regime: " << r.name << '\n';
  for (const std::string& w : r.warnings) log << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// Time-series audit

inline constexpr double kMassTolerance = 1e-12;

/// Problems found in a sample sequence: non-increasing t, mass drift beyond
/// kMassTolerance relative, non-finite values.
inline std::vector<std::string> audit_timeseries(std::span<const DiagnosticsRecord> records) {
  std::vector<std::string> problems;
  if (records.empty()) return problems;
  const double m0 = records.front().mass;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DiagnosticsRecord& r = records[i];
    const std::string at = "sample " + std::to_string(i) + " (t=" + format_number(r.t) + ")";
    if (!r.finite()) problems.push_back(at + ": non-finite value");
    if (i > 0 && !(r.t > records[i - 1].t)) problems.push_back(at + ": t not strictly increasing");
    if (!(std::abs(r.mass - m0) <= kMassTolerance * std::abs(m0))) problems.push_back(at + ": mass drift " + format_number(r.mass - m0));
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Simulation

/// Initial data as evolved: the configured profile, mollified at scale mu.
inline RealField initial_data(const RunConfig& cfg) {
  const TorusGrid grid = cfg.grid();
  RealField rho0 = [&] {
    try {
      return make_initial(cfg.initial_condition(), grid);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  return cfg.mu > 0.0 ? mollify_initial(rho0, cfg.mu) : rho0;
}

struct SimulationResult {
  int exit_code = kExitOk;
  Regime regime;
  std::optional<FinalState> final;
  std::vector<DiagnosticsRecord> records;
  std::vector<std::string> audit;
};

/// Writes timeseries.csv, snapshot_initial.txt and snapshot_final.txt into
/// cfg.out.
inline SimulationResult run_simulation(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const ModelParams p = cfg.model();
  StepperConfig sc = cfg.stepper();
  const RealField rho0 = initial_data(cfg);
  const std::filesystem::path out(cfg.out);

  SimulationResult res{kExitOk, classify_regime(p, rho0), {}, {}, {}};
  log_regime(log, res.regime);

  SpectralField c0 = forward_transform(rho0);
  if (sc.project_initial) c0 = dealias(c0);
  write_snapshot(out / "snapshot_initial.txt", inverse_transform(c0), 0.0);

  TimeSeriesWriter ts(out / "timeseries.csv", sc.s_list);
  res.final = integrate(rho0, p, sc, [&](const DiagnosticsRecord& r) {
    ts.write(r);
    res.records.push_back(r);
  });
  const FinalState& fs = *res.final;
  if (fs.state.finite()) write_snapshot(out / "snapshot_final.txt", inverse_transform(fs.state), fs.t);

  log << "termination: " << to_string(fs.reason) << " at t=" << format_number(fs.t) << " after " << fs.steps << " steps\n";
  if (!fs.detail.empty()) log << "detail: " << fs.detail << '\n';
  res.exit_code = exit_code(fs.reason);

  res.audit = audit_timeseries(res.records);
  for (const std::string& a : res.audit) log << "audit: " << a << '\n';
  if (!res.audit.empty() && res.exit_code == kExitOk) res.exit_code = kExitCheckFailed;
  return res;
}

// ---------------------------------------------------------------------------
// mu-convergence

struct MuRow {
  double mu = 0.0;
  double err_l2 = 0.0;
  double err_hs = 0.0;  // inhomogeneous H^{s-1}
};

struct MuConvergenceReport {
  double s = 0.0;
  std::vector<MuRow> rows;
  bool monotone = true;  // errors nonincreasing along the list
  int exit_code = kExitOk;
};

/// Runs the unregularized reference and one regularized run per mu, and
/// compares the states at t_end. Writes mu_convergence.csv.
inline MuConvergenceReport mu_convergence(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.mu_list.empty()) throw ConfigError("mu_list must be nonempty");
  for (std::size_t i = 0; i < cfg.mu_list.size(); ++i) {
    if (!(cfg.mu_list[i] >= 0.0)) throw ConfigError("mu_list entries must be >= 0");
    if (i > 0 && !(cfg.mu_list[i] < cfg.mu_list[i - 1])) throw ConfigError("mu_list must be strictly descending");
  }
  const StepperConfig sc = cfg.stepper();
  MuConvergenceReport rep;
  rep.s = *std::max_element(cfg.s_list.begin(), cfg.s_list.end());

  auto run = [&](double mu) {
    RunConfig c = cfg;
    c.mu = mu;
    return integrate(initial_data(c), c.model(), sc);
  };
  const FinalState ref = run(0.0);
  log << "reference (mu=0): " << to_string(ref.reason) << " at t=" << format_number(ref.t) << '\n';
  if (ref.reason != Termination::completed) {
    rep.exit_code = exit_code(ref.reason);
    return rep;
  }
  for (double mu : cfg.mu_list) {
    const FinalState fs = mu == 0.0 ? ref : run(mu);
    if (fs.reason != Termination::completed) {
      log << "mu=" << format_number(mu) << ": " << to_string(fs.reason) << '\n';
      rep.exit_code = exit_code(fs.reason);
      return rep;
    }
    const SpectralField diff = fs.state - ref.state;
    rep.rows.push_back({mu, l2_norm(diff), sobolev_norm(diff, rep.s - 1.0, false)});
    log << "mu=" << format_number(mu) << " err_l2=" << format_number(rep.rows.back().err_l2) << '\n';
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) rep.monotone = rep.monotone && rep.rows[i].err_l2 <= rep.rows[i - 1].err_l2;
  if (!rep.monotone) {
    log << "check failed: errors not monotone in mu\n";
    rep.exit_code = kExitCheckFailed;
  }

  std::vector<std::vector<double>> rows;
  for (const MuRow& r : rep.rows) rows.push_back({r.mu, r.err_l2, r.err_hs});
  write_csv(std::filesystem::path(cfg.out) / "mu_convergence.csv", {"mu", "err_l2", "err_h" + format_number(rep.s - 1.0)}, rows);
  return rep;
}

// ---------------------------------------------------------------------------
// Picard iteration

struct PicardReport {
  std::vector<double> d;       // d[n-1] = ||rho^n(T) - rho^{n-1}(T)||
  std::vector<double> ratios;  // ratios[n-2] = d_n / d_{n-1}
  bool diverged = false;
  int exit_code = kExitOk;
};

namespace detail {

/// Cubic Hermite value at the midpoint of an interval of length h.
inline SpectralField hermite_midpoint(const SpectralField& a, const SpectralField& b, const SpectralField& da,
                                      const SpectralField& db, double h) {
  SpectralField m(a.grid);
  for (std::size_t i = 0; i < m.coeffs.size(); ++i)
    m.coeffs[i] = 0.5 * (a.coeffs[i] + b.coeffs[i]) + h / 8.0 * (da.coeffs[i] - db.coeffs[i]);
  return m;
}

inline double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace detail

/// Iterates d_t rho^n + div(rho^n u^{n-1}) = nu Lap rho^n from rho^0 = rho0,
/// with u^{n-1} the velocity of the previous iterate. Iterates live on the
/// fixed time grid of step cfg.dt; the previous iterate is interpolated to
/// the half steps by cubic Hermite. Writes picard.csv.
inline PicardReport picard_iteration(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (!(cfg.mu > 0.0)) throw ConfigError("picard requires mu > 0");
  if (cfg.picard_iterations < 1) throw ConfigError("picard_iterations must be >= 1");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  const ModelParams p = cfg.model();
  const SpectralField c0 = dealias(forward_transform(initial_data(cfg)));
  const TorusGrid& g = c0.grid;

  std::vector<double> ts{0.0};
  while (ts.back() < cfg.t_end) {
    const double rem = cfg.t_end - ts.back();
    ts.push_back(cfg.dt >= rem * (1.0 - 1e-9) ? cfg.t_end : double(ts.size()) * cfg.dt);
  }
  const std::size_t M = ts.size() - 1;

  std::vector<SpectralField> prev(M + 1, c0), dprev(M + 1, SpectralField(g));
  PicardReport rep;
  int rising = 0;
  for (int n = 1; n <= cfg.picard_iterations; ++n) {
    std::vector<SpectralField> cur(M + 1, SpectralField(g)), dcur(M + 1, SpectralField(g));
    cur[0] = c0;
    std::vector<SpectralField> ua = velocity_coefficients(prev[0], p);
    for (std::size_t k = 0; k < M; ++k) {
      const double h = ts[k + 1] - ts[k];
      const std::vector<SpectralField> um =
          velocity_coefficients(detail::hermite_midpoint(prev[k], prev[k + 1], dprev[k], dprev[k + 1], h), p);
      std::vector<SpectralField> ub = velocity_coefficients(prev[k + 1], p);
      auto rhs = [&](double tau, const SpectralField& c) {
        const std::vector<SpectralField>& u = tau == 0.0 ? ua : (tau == h ? ub : um);
        return transport_rhs(c, u);
      };
      try {
        cur[k + 1] = ifrk4_step(cur[k], 0.0, h, p.nu, rhs);
      } catch (const std::domain_error& e) {
        log << "iterate " << n << ": " << e.what() << '\n';
        rep.exit_code = kExitBlowup;
        return rep;
      }
      if (!cur[k + 1].finite()) {
        log << "iterate " << n << ": non-finite state at t=" << format_number(ts[k + 1]) << '\n';
        rep.exit_code = kExitBlowup;
        return rep;
      }
      ua = std::move(ub);
    }
    // time derivative along the iterate, for the next interpolation
    for (std::size_t k = 0; k <= M; ++k) {
      dcur[k] = transport_rhs(cur[k], velocity_coefficients(prev[k], p));
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec2 x = g.wavevector(i);
        dcur[k].coeffs[i] -= p.nu * dot(x, x) * cur[k].coeffs[i];
      }
    }
    rep.d.push_back(l2_norm(cur[M] - prev[M]));
    if (rep.d.size() >= 2) {
      const std::size_t j = rep.d.size() - 1;
      rep.ratios.push_back(detail::safe_ratio(rep.d[j], rep.d[j - 1]));
      rising = rep.d[j] > rep.d[j - 1] ? rising + 1 : 0;
      if (rising >= 3) rep.diverged = true;
    }
    log << "n=" << n << " d_n=" << format_number(rep.d.back()) << '\n';
    prev = std::move(cur);
    dprev = std::move(dcur);
  }
  if (rep.diverged) {
    log << "check failed: successive differences increased 3 times in a row\n";
    rep.exit_code = kExitCheckFailed;
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.d.size(); ++i) rows.push_back({double(i + 1), rep.d[i], i == 0 ? 0.0 : rep.ratios[i - 1]});
  write_csv(std::filesystem::path(cfg.out) / "picard.csv", {"n", "d_n", "ratio"}, rows);
  return rep;
}

// ---------------------------------------------------------------------------
// Grid refinement

struct RefinementRow {
  int n_coarse = 0;
  int n_fine = 0;
  double err_initial = 0.0;
  double err_final = 0.0;
};

struct RefinementReport {
  std::vector<RefinementRow> rows;
  std::vector<double> ratios;  // err_final[i-1] / err_final[i]
  int exit_code = kExitOk;
};

/// L2 norm of coarse - fine over the coarse lattice.
inline double restricted_difference(const SpectralField& coarse, const SpectralField& fine) {
  SpectralField D(coarse.grid);
  for (std::size_t i = 0; i < D.coeffs.size(); ++i) D.coeffs[i] = coarse.coeffs[i] - fine.at(coarse.grid.wave(i));
  return l2_norm(D);
}

/// Runs the configuration at each N of cfg.refine_N and compares successive
/// resolutions. Writes refinement.csv.
inline RefinementReport grid_refinement(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  if (cfg.refine_N.size() < 2) throw ConfigError("refine_N needs at least two resolutions");
  for (std::size_t i = 1; i < cfg.refine_N.size(); ++i)
    if (cfg.refine_N[i] != 2 * cfg.refine_N[i - 1]) throw ConfigError("refine_N must double at each entry");
  const StepperConfig sc = cfg.stepper();

  RefinementReport rep;
  std::vector<SpectralField> initial, final;
  for (int n : cfg.refine_N) {
    RunConfig c = cfg;
    c.N = n;
    c.validate();
    const RealField rho0 = initial_data(c);
    initial.push_back(dealias(forward_transform(rho0)));
    FinalState fs = integrate(rho0, c.model(), sc);
    log << "N=" << n << ": " << to_string(fs.reason) << " at t=" << format_number(fs.t) << '\n';
    if (fs.reason != Termination::completed) {
      rep.exit_code = exit_code(fs.reason);
      return rep;
    }
    final.push_back(std::move(fs.state));
  }
  for (std::size_t i = 1; i < final.size(); ++i) {
    rep.rows.push_back({cfg.refine_N[i - 1], cfg.refine_N[i], restricted_difference(initial[i - 1], initial[i]),
                        restricted_difference(final[i - 1], final[i])});
    log << "N=" << cfg.refine_N[i - 1] << "->" << cfg.refine_N[i] << " err=" << format_number(rep.rows.back().err_final) << '\n';
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    rep.ratios.push_back(detail::safe_ratio(rep.rows[i - 1].err_final, rep.rows[i].err_final));

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const RefinementRow& r = rep.rows[i];
    rows.push_back({double(r.n_coarse), double(r.n_fine), r.err_initial, r.err_final, i == 0 ? 0.0 : rep.ratios[i - 1]});
  }
  write_csv(std::filesystem::path(cfg.out) / "refinement.csv", {"N_coarse", "N_fine", "err_initial", "err_final", "ratio"}, rows);
  return rep;
}

// ---------------------------------------------------------------------------
// Verification suite

struct VerifySuiteResult {
  std::vector<VerifyReport> reports;
  int exit_code = kExitOk;
};

inline const std::vector<std::string>& verify_estimates() {
  static const std::vector<std::string> names{"lemma1", "bdiff", "gdecomp", "commutator", "plain_commutator", "antisymmetry"};
  return names;
}

/// Runs the selected estimates and writes verify_report.txt.
inline VerifySuiteResult verify_suite(const RunConfig& cfg, std::ostream& log) {
  if (cfg.verify.empty()) throw ConfigError("verify selection is empty");
  for (const std::string& name : cfg.verify)
    if (std::find(verify_estimates().begin(), verify_estimates().end(), name) == verify_estimates().end())
      throw ConfigError("unknown verify estimate '" + name + "'");
  Sampler sampler;
  try {
    sampler = sampler_from_string(cfg.sampler);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (int d : cfg.verify_dims)
    if (d != 1 && d != 2) throw ConfigError("verify_dims entries must be 1 or 2");

  VerifySuiteResult res;
  try {
    for (const std::string& name : verify_estimates()) {
      if (std::find(cfg.verify.begin(), cfg.verify.end(), name) == cfg.verify.end()) continue;
      for (int d : cfg.verify_dims) {
        if (name == "lemma1") {
          for (double s : cfg.verify_s) res.reports.push_back(sample_lemma1(s, d, cfg.verify_samples, sampler, cfg.seed));
        } else if (name == "bdiff") {
          for (double b : cfg.verify_b) res.reports.push_back(sample_bdiff(b, d, cfg.verify_samples, sampler, cfg.seed));
        } else if (name == "gdecomp") {
          for (double s : cfg.verify_s)
            for (double b : cfg.verify_b) res.reports.push_back(sample_gdecomp(s, b, d, cfg.verify_samples, sampler, cfg.seed));
        } else if (name == "commutator" || name == "plain_commutator") {
          for (double b : cfg.verify_b)
            res.reports.push_back(sample_commutator({b, d, cfg.commutator_N, cfg.commutator_trials, cfg.eps, cfg.seed, name == "plain_commutator"}));
        } else {
          res.reports.push_back(sample_antisymmetry(d, cfg.antisymmetry_N, cfg.antisymmetry_fields, cfg.seed));
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::string text;
  for (const VerifyReport& r : res.reports) {
    text += to_text(r) + "\n";
    log << (r.pass ? "pass: " : "FAIL: ") << r.name << " sup_ratio=" << format_number(r.sup_ratio) << '\n';
    if (!r.pass) res.exit_code = kExitCheckFailed;
  }
  write_text(std::filesystem::path(cfg.out) / "verify_report.txt", text);
  return res;
}

}  // namespace fpm
