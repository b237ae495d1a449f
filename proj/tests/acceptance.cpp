// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fpm/fpm.hpp"

using namespace fpm;
namespace fs = std::filesystem;

namespace {

int failures = 0;
std::ostringstream sink;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " " << id << " " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

// A criterion that throws is a failure, not a crash.
void run(int id, const std::string& name, const std::function<void(int, const std::string&)>& body) {
  try {
    body(id, name);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fpm_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

void heat(int id, const std::string& name) {
  const TorusGrid g(1, 64);
  const RealField rho0 = RealField::sample(g, [](const Vec2& x) { return 1.0 + std::cos(x[0]); });
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const auto t0 = std::chrono::steady_clock::now();
  const FinalState fs = integrate(rho0, ModelParams::make(-1.0, 0.0, 1.0), cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const RealField r = inverse_transform(fs.state);
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double exact = 1.0 + std::exp(-0.1) * std::cos(g.point(i)[0]);
    err = std::max(err, std::abs(r.values[i] - exact));
    ref = std::max(ref, std::abs(exact));
  }
  const double rel = err / ref;
  report(id, name, fs.reason == Termination::completed && rel < 1e-8 && secs < 1.0,
         "rel_err=" + fmt(rel) + " runtime=" + fmt(secs) + "s");
}

void mass_conservation(int id, const std::string& name) {
  std::vector<fs::path> cfgs;
  for (const auto& e : fs::directory_iterator(FPM_CONFIG_DIR))
    if (e.path().extension() == ".cfg") cfgs.push_back(e.path());
  std::sort(cfgs.begin(), cfgs.end());
  bool ok = !cfgs.empty();
  double worst = 0.0;
  std::string bad;
  for (const fs::path& p : cfgs) {
    RunConfig c = load_config(p);
    c.out = scratch("mass_" + p.stem().string()).string();
    const SimulationResult r = run_simulation(c, sink);
    double drift = 0.0;
    for (const auto& rec : r.records) drift = std::max(drift, std::abs(rec.mass - r.records.front().mass) / std::abs(r.records.front().mass));
    worst = std::max(worst, drift);
    if (r.records.size() < 2 || !(drift <= 1e-12)) {
      ok = false;
      bad += " " + p.filename().string();
    }
  }
  report(id, name, ok, std::to_string(cfgs.size()) + " configs, max relative drift=" + fmt(worst) + (bad.empty() ? "" : " failing:" + bad));
}

void operator_algebra(int id, const std::string& name) {
  const std::vector<std::pair<double, double>> pairs{{0.5, 1.5}, {-1.0, 2.0}, {-0.75, -0.25}, {1.3, -0.4}, {2.5, 0.7}};
  double worst = 0.0;
  for (int d : {1, 2})
    for (int n : {32, 64}) {
      const TorusGrid g(d, n);
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const SpectralField F = random_trig_field(g, seed, 11, 0.5, true);
        for (auto [s1, s2] : pairs) {
          const SpectralField a = apply_multiplier(apply_multiplier(F, fractional_power(s2)), fractional_power(s1));
          const SpectralField b = apply_multiplier(F, fractional_power(s1 + s2));
          worst = std::max(worst, max_abs_diff(a, b) / b.max_abs());
        }
      }
    }
  report(id, name, worst <= 1e-12, "max relative error=" + fmt(worst));
}

void antisymmetry(int id, const std::string& name) {
  bool ok = true;
  double sup = 0.0;
  std::size_t samples = 0;
  for (int d : {1, 2}) {
    const VerifyReport r = sample_antisymmetry(d, 32, 100, 1);
    ok = ok && r.pass && r.samples == 500;
    sup = std::max(sup, r.sup_ratio);
    samples += r.samples;
  }
  double agree = 0.0;
  for (int d : {1, 2})
    for (double s : {0.0, 1.0, 3.0})
      for (double mu : {0.0, 0.25}) {
        const SpectralField F = random_trig_field(TorusGrid(d, 32), 17, 3, 0.5, false);
        const TrilinearKernel G = energy_kernel(ModelParams::make(-1.0, -1.0, 0.0, mu), s);
        const TrilinearSum naive = trilinear_naive(G, F);
        agree = std::max(agree, std::abs(naive.value - trilinear_T(G, F, TrilinearMode::fft)) / naive.scale);
      }
  ok = ok && sup <= 1e-10 && agree <= 1e-10;
  report(id, name, ok, std::to_string(samples) + " samples, sup |T|/scale=" + fmt(sup) + ", naive/fft relative gap=" + fmt(agree));
}

void energy_identity(int id, const std::string& name) {
  const TorusGrid g(1, 64);
  const RealField rho0 = RealField::sample(g, [](const Vec2& x) { return 1.0 + 0.5 * std::cos(x[0]) + 0.2 * std::sin(2 * x[0]); });
  const ModelParams p = ModelParams::make(-1.0, -1.0, 0.0);
  const std::vector<double> dts{4e-3, 2e-3, 1e-3};
  const double spacing = 0.016;  // common sample times
  std::vector<double> res;
  for (double dt : dts) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.4;
    cfg.sample_every = 4;
    double worst = 0.0;
    integrate(rho0, p, cfg, [&](const DiagnosticsRecord& r) {
      const double q = r.t / spacing;
      if (std::abs(q - std::round(q)) < 1e-9) worst = std::max(worst, r.energy_residual_L2);
    });
    res.push_back(worst);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    mx += std::log(dts[i]) / 3;
    my += std::log(res[i]) / 3;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxy += (std::log(dts[i]) - mx) * (std::log(res[i]) - my);
    sxx += std::pow(std::log(dts[i]) - mx, 2);
  }
  const double order = sxy / sxx;
  report(id, name, order >= 2.0 && res[2] < res[1] && res[1] < res[0],
         "residuals=" + fmt(res[0]) + "," + fmt(res[1]) + "," + fmt(res[2]) + " fitted order=" + fmt(order));
}

void lemma1(int id, const std::string& name) {
  bool ok = true;
  std::string detail;
  for (double s : {3.0, 4.0, 6.0})
    for (int d : {1, 2}) {
      const VerifyReport r = sample_lemma1(s, d, 100000);
      ok = ok && r.samples >= 100000 && std::isfinite(r.sup_ratio);
      detail += " sup(s=" + fmt(s) + ",d=" + std::to_string(d) + ")=" + fmt(r.sup_ratio);
    }
  const RatioSample spot = lemma1_gap({2, 0}, {1, 0}, 3.0);
  ok = ok && spot.ratio == 1.5;
  double drift = 0.0;
  for (double s : {3.0, 4.0, 6.0})
    for (int d : {1, 2})
      for (const auto& [xi, eta] : sample_pairs(d, 2000, Sampler::mixed, 5)) {
        const RatioSample base = lemma1_gap(xi, eta, s);
        if (base.degenerate || base.ratio == 0.0) continue;
        for (double lam : {1e-3, 0.1, 10.0, 1e3})
          drift = std::max(drift, std::abs(lemma1_gap(lam * xi, lam * eta, s).ratio - base.ratio) / base.ratio);
      }
  ok = ok && drift <= 1e-10;
  report(id, name, ok, "spot=" + fmt(spot.ratio) + " scale drift=" + fmt(drift) + detail);
}

void commutator(int id, const std::string& name) {
  bool ok = true;
  std::string detail;
  for (int d : {1, 2})
    for (double b : {0.25, 0.5, 0.75}) {
      const VerifyReport a = sample_commutator({b, d, 64, 200, 0.5, 1, false});
      const VerifyReport c = sample_commutator({b, d, 128, 200, 0.5, 1, false});
      const double change = std::max(a.sup_ratio, c.sup_ratio) / std::min(a.sup_ratio, c.sup_ratio);
      ok = ok && std::isfinite(a.sup_ratio) && std::isfinite(c.sup_ratio) && a.sup_ratio > 0.0 && change < 2.0;
      detail += " d=" + std::to_string(d) + ",b=" + fmt(b) + ":" + fmt(a.sup_ratio) + "->" + fmt(c.sup_ratio);
    }
  double lhs = 0.0;
  for (int d : {1, 2})
    for (double b : {0.25, 0.5, 0.75}) {
      const TorusGrid g(d, 64);
      SpectralField f(g);
      f.coeffs[0] = 1.7;
      lhs = std::max(lhs, commutator_ratio(f, random_trig_field(g, 9, 2, 1.0, true), b).lhs);
    }
  ok = ok && lhs <= 1e-12;
  report(id, name, ok, "constant-f lhs=" + fmt(lhs) + detail);
}

RunConfig config(const std::string& file, const std::string& out) {
  RunConfig c = load_config(fs::path(FPM_CONFIG_DIR) / file);
  c.out = scratch(out).string();
  return c;
}

void mu_limit(int id, const std::string& name) {
  RunConfig c = config("mu_converge.cfg", "mu");
  c.mu_list = {0.5, 0.25, 0.125};
  const MuConvergenceReport r = mu_convergence(c, sink);
  bool ok = r.rows.size() == 3;
  std::string detail;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    detail += " mu=" + fmt(r.rows[i].mu) + ":" + fmt(r.rows[i].err_l2);
    if (i > 0) ok = ok && r.rows[i].err_l2 < r.rows[i - 1].err_l2;
  }
  report(id, name, ok, "L2 errors" + detail);
}

void picard(int id, const std::string& name) {
  RunConfig c = config("picard.cfg", "picard");
  c.t_end = 0.05;
  c.mu = 0.25;
  c.picard_iterations = std::max(c.picard_iterations, 6);
  const PicardReport r = picard_iteration(c, sink);
  bool ok = r.ratios.size() >= 5 && !r.diverged;
  std::string detail;
  for (std::size_t i = 0; i < std::min<std::size_t>(5, r.ratios.size()); ++i) {
    ok = ok && r.ratios[i] < 1.0;
    detail += " " + fmt(r.ratios[i]);
  }
  report(id, name, ok, "d_{n+1}/d_n for n=2..6:" + detail);
}

void blowup_contrast(int id, const std::string& name) {
  RunConfig c;
  c.dim = 1;
  c.N = 128;
  c.alpha_minus_d = -1.0;
  c.nu = 0.0;
  c.ic = "cosine";
  c.ic_mean = 1.0;
  c.ic_amplitude = 0.5;
  c.dt = 1e-3;
  c.sample_every = 10;

  c.c_K = -1.0;
  c.t_end = 1.0;
  c.out = scratch("repulsive").string();
  const SimulationResult rep = run_simulation(c, sink);
  const auto& rr = rep.records;
  const bool rep_ok = rep.exit_code == kExitOk && !rr.empty() && rr.back().t == 1.0 && std::isfinite(rr.back().int_B1) &&
                      rr.back().B1 <= 10.0 * rr.front().B1;

  c.c_K = 1.0;
  c.t_end = 5.0;
  c.blowup_threshold = 1e3;
  c.out = scratch("attractive").string();
  const SimulationResult att = run_simulation(c, sink);
  const auto& ar = att.records;
  bool increasing = ar.size() >= 4;
  for (std::size_t i = ar.size() / 2 + 1; i < ar.size(); ++i) increasing = increasing && ar[i].B1 > ar[i - 1].B1;

  report(id, name, rep_ok && increasing,
         "c_K=-1: B1 " + fmt(rr.front().B1) + "->" + fmt(rr.back().B1) + " int_B1=" + fmt(rr.back().int_B1) +
             "; c_K=+1: " + std::to_string(ar.size()) + " samples, B1 " + fmt(ar.front().B1) + "->" + fmt(ar.back().B1) +
             " by t=" + fmt(ar.back().t) + (increasing ? " (increasing over last half)" : " (not increasing)"));
}

void self_convergence(int id, const std::string& name) {
  RunConfig c = config("refine.cfg", "refine");
  c.nu = 0.0;
  c.c_K = -1.0;
  c.t_end = 0.2;
  c.refine_N = {64, 128, 256};
  const RefinementReport r = grid_refinement(c, sink);
  const bool ok = r.exit_code == kExitOk && r.ratios.size() == 1 && r.ratios[0] >= 10.0;
  report(id, name, ok,
         "err(64->128)=" + fmt(r.rows.at(0).err_final) + " err(128->256)=" + fmt(r.rows.at(1).err_final) +
             " ratio=" + fmt(r.ratios.empty() ? 0.0 : r.ratios[0]));
}

void determinism(int id, const std::string& name) {
  bool ok = true;
  std::string detail;
  for (const char* file : {"random_2d.cfg", "attractive_1d.cfg"}) {
    RunConfig c = config(file, "det");
    c.seed = 42;
    const fs::path a = scratch(std::string("det_a_") + file), b = scratch(std::string("det_b_") + file);
    c.out = a.string();
    run_simulation(c, sink);
    c.out = b.string();
    run_simulation(c, sink);
    for (const char* f : {"timeseries.csv", "snapshot_initial.txt", "snapshot_final.txt"}) {
      const std::string x = slurp(a / f), y = slurp(b / f);
      if (x.empty() || x != y) {
        ok = false;
        detail += std::string(" differs:") + file + "/" + f;
      }
    }
  }
  RunConfig m = config("mu_converge.cfg", "det_mu");
  const fs::path a = scratch("det_mu_a"), b = scratch("det_mu_b");
  m.out = a.string();
  mu_convergence(m, sink);
  m.out = b.string();
  mu_convergence(m, sink);
  if (slurp(a / "mu_convergence.csv") != slurp(b / "mu_convergence.csv")) {
    ok = false;
    detail += " differs:mu_convergence.csv";
  }
  report(id, name, ok, ok ? "outputs byte-identical" : detail);
}

}  // namespace

int main() {
  run(1, "heat-equation exactness", heat);
  run(2, "mass conservation", mass_conservation);
  run(3, "spectral operator algebra", operator_algebra);
  run(4, "trilinear antisymmetry", antisymmetry);
  run(5, "L2 energy identity", energy_identity);
  run(6, "elementary inequality", lemma1);
  run(7, "commutator estimate", commutator);
  run(8, "mu-convergence", mu_limit);
  run(9, "Picard contraction", picard);
  run(10, "blow-up functional contrast", blowup_contrast);
  run(11, "spectral self-convergence", self_convergence);
  run(12, "determinism", determinism);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
