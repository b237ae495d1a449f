// fpm: simulate and probe the fractional porous medium equation on the torus.
//
//   fpm simulate    --config run.cfg [--out DIR] [--seed S] [--key value ...]
//   fpm mu-converge ...
//   fpm picard      ...
//   fpm refine      ...
//   fpm verify      ...

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fpm/fpm.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::string> out;
  std::optional<long> seed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "RunConfig file (key = value)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "random seed");
  sub->allow_extras();
}

fpm::RunConfig build_config(const Common& c, const std::vector<std::string>& extras) {
  fpm::RunConfig cfg = c.config.empty() ? fpm::RunConfig{} : fpm::load_config(c.config);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0) throw fpm::ConfigError("unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    if (auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.erase(eq);
    } else {
      if (i + 1 >= extras.size()) throw fpm::ConfigError("missing value for --" + key);
      value = extras[++i];
    }
    fpm::set_key(cfg, key, value);
  }
  if (c.out) fpm::set_key(cfg, "out", *c.out);
  if (c.seed) fpm::set_key(cfg, "seed", std::to_string(*c.seed));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral solver for the fractional porous medium equation"};
  app.require_subcommand(1);
  Common common;
  const std::vector<std::string> names{"simulate", "mu-converge", "picard", "refine", "verify"};
  std::vector<CLI::App*> subs;
  for (const std::string& n : names) {
    subs.push_back(app.add_subcommand(n));
    add_common(subs.back(), common);
  }
  subs[0]->description("integrate one configuration, write time series and snapshots");
  subs[1]->description("compare regularized runs against the mu = 0 reference");
  subs[2]->description("frozen-velocity Picard iteration for the regularized system");
  subs[3]->description("self-convergence across doubling resolutions");
  subs[4]->description("sample the analytic estimates and the trilinear cancellation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fpm::kExitConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const fpm::RunConfig cfg = build_config(common, sub->remaining());
    const std::string name = sub->get_name();
    if (name == "simulate") return fpm::run_simulation(cfg, std::cerr).exit_code;
    if (name == "mu-converge") return fpm::mu_convergence(cfg, std::cerr).exit_code;
    if (name == "picard") return fpm::picard_iteration(cfg, std::cerr).exit_code;
    if (name == "refine") return fpm::grid_refinement(cfg, std::cerr).exit_code;
    return fpm::verify_suite(cfg, std::cerr).exit_code;
  } catch (const fpm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return fpm::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fpm::kExitCheckFailed;
  }
}
