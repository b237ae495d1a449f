#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace fpm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fpm_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ostringstream sink;

}  // namespace

TEST(Config, ParsesKeysListsAndComments) {
  const RunConfig c = parse_config(
      "# comment\n"
      "dim = 2\n"
      "N=32   # trailing\n"
      "s_list = 0.5, 2\n"
      "ic = gaussian\n"
      "ic_center = 1, 2\n"
      "verify = lemma1,bdiff\n");
  EXPECT_EQ(c.dim, 2);
  EXPECT_EQ(c.N, 32);
  EXPECT_EQ(c.s_list, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(c.verify, (std::vector<std::string>{"lemma1", "bdiff"}));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("N = many\n"), ConfigError);
  EXPECT_THROW(parse_config("N 32\n"), ConfigError);
  EXPECT_THROW(parse_config("N = 31\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("sample_every = 0\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("s_list = \n").validate(), ConfigError);
  EXPECT_THROW(parse_config("cutoff = box\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("ic = square\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("alpha_minus_d = 1\n").validate(), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST(Config, OverridesApplyAfterFile) {
  RunConfig c = parse_config("nu = 0.5\n");
  set_key(c, "nu", "0.25");
  EXPECT_EQ(c.nu, 0.25);
  EXPECT_THROW(set_key(c, "Nu", "1"), ConfigError);
}

TEST(Regime, Classification) {
  const TorusGrid g(1, 16);
  const RealField pos = RealField::sample(g, [](const Vec2& x) { return 1.0 + 0.5 * std::cos(x[0]); });
  EXPECT_EQ(classify_regime(ModelParams::make(-1, -1, 0), pos).name, "case1");
  EXPECT_TRUE(classify_regime(ModelParams::make(-1, -1, 0), pos).warnings.empty());
  EXPECT_EQ(classify_regime(ModelParams::make(-1, 1, 0.1), pos).name, "case2");
  EXPECT_EQ(classify_regime(ModelParams::make(0, 1, 0.1), pos).warnings.size(), 1u);
  const Regime out = classify_regime(ModelParams::make(-1, 1, 0), pos);
  EXPECT_EQ(out.name, "outside");
  EXPECT_NE(out.warnings.at(0).find("outside Theorem 1 hypotheses"), std::string::npos);
}

TEST(Audit, FlagsDriftAndTimeOrder) {
  DiagnosticsRecord a, b;
  a.t = 0.0;
  a.mass = 1.0;
  b.t = 0.1;
  b.mass = 1.0;
  std::vector<DiagnosticsRecord> ok{a, b};
  EXPECT_TRUE(audit_timeseries(ok).empty());
  b.mass = 1.0 + 1e-9;
  b.t = 0.0;
  std::vector<DiagnosticsRecord> bad{a, b};
  EXPECT_EQ(audit_timeseries(bad).size(), 2u);
}

TEST(Io, SnapshotRoundTrip) {
  const fs::path dir = scratch("snap");
  const RealField f = inverse_transform(oracle::random_band_field(TorusGrid(2, 8), 3));
  write_snapshot(dir / "s.txt", f, 0.125);
  const Snapshot s = read_snapshot(dir / "s.txt");
  EXPECT_EQ(s.t, 0.125);
  EXPECT_EQ(s.field.grid, f.grid);
  EXPECT_EQ(s.field.values, f.values);  // 17 digits round-trips doubles
  std::ifstream in(dir / "s.txt");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "2 8 0.125");
}

TEST(Simulate, HeatRunWritesArtifacts) {
  RunConfig c = parse_config("c_K = 0\nnu = 1\nic_amplitude = 1\nt_end = 0.1\nsample_every = 20\n");
  c.out = scratch("heat").string();
  const SimulationResult r = run_simulation(c, sink);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.audit.empty());
  const Table t = read_csv(fs::path(c.out) / "timeseries.csv");
  EXPECT_EQ(t.columns, timeseries_columns(c.s_list));
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows.back()[t.column("t")], 0.1);
  const Snapshot fin = read_snapshot(fs::path(c.out) / "snapshot_final.txt");
  for (std::size_t i = 0; i < fin.field.values.size(); ++i)
    EXPECT_NEAR(fin.field.values[i], 1.0 + std::exp(-0.1) * std::cos(fin.field.grid.point(i)[0]), 1e-10);
}

TEST(Simulate, ExitCodesFollowTermination) {
  RunConfig c = parse_config("c_K = 1\nt_end = 5\nblowup_threshold = 3\n");
  c.out = scratch("blow").string();
  EXPECT_EQ(run_simulation(c, sink).exit_code, kExitBlowup);
  c = parse_config("max_steps = 5\n");
  c.out = scratch("max").string();
  EXPECT_EQ(run_simulation(c, sink).exit_code, kExitMaxSteps);
  EXPECT_EQ(exit_code(Termination::completed), kExitOk);
}

TEST(Simulate, Deterministic) {
  RunConfig c = parse_config("dim = 2\nN = 32\nic = random\nseed = 11\nt_end = 0.05\nsample_every = 5\n");
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  c.out = a.string();
  run_simulation(c, sink);
  c.out = b.string();
  run_simulation(c, sink);
  for (const char* f : {"timeseries.csv", "snapshot_initial.txt", "snapshot_final.txt"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(MuConvergence, ZeroInListGivesZero) {
  RunConfig c = parse_config("t_end = 0.1\nmu_list = 0.5, 0\n");
  c.out = scratch("mu0").string();
  const MuConvergenceReport r = mu_convergence(c, sink);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[1].err_l2, 0.0);
  EXPECT_GT(r.rows[0].err_l2, 0.0);
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "mu_convergence.csv"));
  EXPECT_THROW(mu_convergence(parse_config("mu_list = 0.1, 0.2\n"), sink), ConfigError);
}

TEST(MuConvergence, FullCutoffFreezesTransport) {
  // mu = 1 cuts every mode with |k| >= 1: rho^(mu) stays at the mollified data
  RunConfig c = parse_config("t_end = 0.1\nmu_list = 1\n");
  c.out = scratch("mu1").string();
  const MuConvergenceReport r = mu_convergence(c, sink);
  RunConfig ref = c;
  ref.mu = 0.0;
  const FinalState fs0 = integrate(initial_data(ref), ref.model(), ref.stepper());
  RunConfig m = c;
  m.mu = 1.0;
  const SpectralField frozen = dealias(forward_transform(initial_data(m)));
  EXPECT_NEAR(r.rows.at(0).err_l2, l2_norm(frozen - fs0.state), 1e-14);
}

TEST(Picard, TrivialCases) {
  RunConfig c = parse_config("mu = 0.25\nt_end = 0.05\nic_amplitude = 0\npicard_iterations = 1\n");
  c.out = scratch("pic1").string();
  PicardReport r = picard_iteration(c, sink);
  ASSERT_EQ(r.d.size(), 1u);
  EXPECT_EQ(r.d[0], 0.0);

  c = parse_config("mu = 0.25\nt_end = 0.05\nc_K = 0\npicard_iterations = 4\n");
  c.out = scratch("pic2").string();
  r = picard_iteration(c, sink);
  for (double d : r.d) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(r.exit_code, kExitOk);

  EXPECT_THROW(picard_iteration(parse_config("mu = 0\n"), sink), ConfigError);
}

TEST(Picard, FirstIterateIsLinearTransport) {
  // Iterate 1 is the nonlinear step with the velocity frozen at rho0; with a
  // constant-in-time velocity the Hermite data are exact.
  RunConfig c = parse_config("mu = 0.25\nt_end = 0.02\ndt = 1e-3\npicard_iterations = 1\n");
  c.out = scratch("pic3").string();
  const PicardReport r = picard_iteration(c, sink);
  const ModelParams p = c.model();
  SpectralField s = dealias(forward_transform(initial_data(c)));
  const SpectralField s0 = s;
  const auto u = velocity_coefficients(s0, p);
  for (int k = 0; k < 20; ++k) s = ifrk4_step(s, 0.0, 1e-3, p.nu, [&](double, const SpectralField& x) { return transport_rhs(x, u); });
  EXPECT_NEAR(r.d.at(0), l2_norm(s - s0), 1e-14);
}

TEST(Refine, BandLimitedDataAgreeInitially) {
  RunConfig c = parse_config("t_end = 0.05\nrefine_N = 32, 64, 128\n");
  c.out = scratch("ref").string();
  const RefinementReport r = grid_refinement(c, sink);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) EXPECT_LE(row.err_initial, 1e-15);
  EXPECT_THROW(grid_refinement(parse_config("refine_N = 32, 48\n"), sink), ConfigError);
}

TEST(Refine, HeatCaseAtRoundoff) {
  RunConfig c = parse_config("c_K = 0\nnu = 1\nt_end = 0.1\nrefine_N = 16, 32, 64\n");
  c.out = scratch("refheat").string();
  for (const auto& row : grid_refinement(c, sink).rows) EXPECT_LE(row.err_final, 1e-14);
}

TEST(Verify, SelectionHandling) {
  RunConfig c = parse_config("verify = lemma1\nverify_s = 3\nverify_dims = 1\nverify_samples = 2000\n");
  c.out = scratch("ver").string();
  const VerifySuiteResult r = verify_suite(c, sink);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_NE(slurp(fs::path(c.out) / "verify_report.txt").find("[lemma1 s=3 d=1]"), std::string::npos);
  c.verify.clear();
  EXPECT_THROW(verify_suite(c, sink), ConfigError);
  c.verify = {"lemma2"};
  EXPECT_THROW(verify_suite(c, sink), ConfigError);
}

TEST(Verify, AntisymmetrySelection) {
  RunConfig c = parse_config("verify = antisymmetry\nverify_dims = 1\nantisymmetry_fields = 10\nantisymmetry_N = 16\n");
  c.out = scratch("ver_a").string();
  const VerifySuiteResult r = verify_suite(c, sink);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_TRUE(r.reports[0].pass);
}
