#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpm/model.hpp"
#include "fpm/timestepping.hpp"
#include "fpm/verify.hpp"

namespace fpm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a CLI run needs. Text form: one `key = value` per line, `#`
/// starts a comment, lists are comma-separated.
struct RunConfig {
  // discretization and model
  int dim = 1;
  int N = 64;
  double alpha_minus_d = -1.0;
  double c_K = -1.0;
  double nu = 0.0;
  double mu = 0.0;
  std::string cutoff = "bump";

  // initial data: cosine | gaussian | random
  std::string ic = "cosine";
  double ic_mean = 1.0;
  double ic_amplitude = 0.5;
  std::vector<int> ic_k{1};
  double ic_mass = 1.0;
  double ic_width = 0.5;
  std::vector<double> ic_center{std::numbers::pi};
  double ic_decay = 0.5;

  // time stepping
  double t_end = 1.0;
  std::string dt_policy = "fixed";
  double dt = 1e-3;
  double safety = 0.5;
  double dt_max = 1e-2;
  long max_steps = 10'000'000;
  int sample_every = 10;
  std::vector<double> s_list{1.0, 3.0};
  double blowup_threshold = 1e8;

  std::string out = "out";
  std::uint64_t seed = 1;

  // campaigns
  std::vector<double> mu_list{0.5, 0.25, 0.125};
  int picard_iterations = 7;
  std::vector<int> refine_N{64, 128, 256};
  std::vector<std::string> verify{"lemma1", "bdiff", "gdecomp", "commutator", "plain_commutator", "antisymmetry"};
  std::size_t verify_samples = 100000;
  std::vector<double> verify_s{3.0, 4.0, 6.0};
  std::vector<double> verify_b{0.25, 0.5, 0.75};
  std::vector<int> verify_dims{1, 2};
  std::string sampler = "mixed";
  std::size_t commutator_trials = 200;
  int commutator_N = 64;
  double eps = 0.5;
  std::size_t antisymmetry_fields = 100;
  int antisymmetry_N = 32;

  ModelParams model() const {
    try {
      return ModelParams::make(alpha_minus_d, c_K, nu, mu, CutoffSpec::by_name(cutoff));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  TorusGrid grid() const {
    try {
      return TorusGrid(dim, N);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  InitialCondition initial_condition() const {
    auto wave = [&] {
      Wave k{0, 0};
      if (ic_k.empty() || int(ic_k.size()) > dim) throw ConfigError("ic_k must have 1.." + std::to_string(dim) + " components");
      for (std::size_t i = 0; i < ic_k.size(); ++i) k[i] = ic_k[i];
      return k;
    };
    if (ic == "cosine") return CosinePerturbation{ic_mean, ic_amplitude, wave()};
    if (ic == "gaussian") {
      Vec2 c{0.0, 0.0};
      if (ic_center.empty() || int(ic_center.size()) > dim) throw ConfigError("ic_center must have 1.." + std::to_string(dim) + " components");
      for (std::size_t i = 0; i < ic_center.size(); ++i) c[i] = ic_center[i];
      if (dim == 2 && ic_center.size() == 1) c[1] = c[0];
      return GaussianBump{ic_mass, ic_width, c};
    }
    if (ic == "random") return SpectralRandom{seed, ic_decay, ic_mean, ic_amplitude};
    throw ConfigError("unknown ic '" + ic + "' (expected cosine, gaussian or random)");
  }

  StepperConfig stepper() const {
    StepperConfig s;
    if (dt_policy == "fixed") s.dt_policy = DtPolicy::fixed;
    else if (dt_policy == "adaptive") s.dt_policy = DtPolicy::adaptive;
    else throw ConfigError("unknown dt_policy '" + dt_policy + "' (expected fixed or adaptive)");
    s.dt = dt;
    s.safety = safety;
    s.dt_max = dt_max;
    s.t_end = t_end;
    s.max_steps = max_steps;
    s.blowup_threshold = blowup_threshold;
    s.sample_every = sample_every;
    s.s_list = s_list;
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return s;
  }

  /// Full validation; throws ConfigError.
  void validate() const {
    (void)grid();
    (void)model();
    (void)stepper();
    (void)initial_condition();
    try {
      (void)sampler_from_string(sampler);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

inline long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v, Parse parse) {
  std::vector<T> out;
  for (const std::string& item : split_list(v)) out.push_back(T(parse(key, item)));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [](double RunConfig::*m) { return [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = parse_double(k, v); }; };
    auto int_ = [](int RunConfig::*m) { return [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = int(parse_long(k, v)); }; };
    auto size = [](std::size_t RunConfig::*m) {
      return [m](RunConfig& c, const std::string& k, const std::string& v) {
        const long x = parse_long(k, v);
        if (x < 0) throw ConfigError("key '" + k + "' must be nonnegative");
        c.*m = std::size_t(x);
      };
    };
    auto str = [](std::string RunConfig::*m) { return [m](RunConfig& c, const std::string&, const std::string& v) { c.*m = v; }; };
    auto dlist = [](std::vector<double> RunConfig::*m) {
      return [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = parse_list<double>(k, v, parse_double); };
    };
    auto ilist = [](std::vector<int> RunConfig::*m) {
      return [m](RunConfig& c, const std::string& k, const std::string& v) { c.*m = parse_list<int>(k, v, parse_long); };
    };
    t["dim"] = int_(&RunConfig::dim);
    t["N"] = int_(&RunConfig::N);
    t["alpha_minus_d"] = dbl(&RunConfig::alpha_minus_d);
    t["c_K"] = dbl(&RunConfig::c_K);
    t["nu"] = dbl(&RunConfig::nu);
    t["mu"] = dbl(&RunConfig::mu);
    t["cutoff"] = str(&RunConfig::cutoff);
    t["ic"] = str(&RunConfig::ic);
    t["ic_mean"] = dbl(&RunConfig::ic_mean);
    t["ic_amplitude"] = dbl(&RunConfig::ic_amplitude);
    t["ic_k"] = ilist(&RunConfig::ic_k);
    t["ic_mass"] = dbl(&RunConfig::ic_mass);
    t["ic_width"] = dbl(&RunConfig::ic_width);
    t["ic_center"] = dlist(&RunConfig::ic_center);
    t["ic_decay"] = dbl(&RunConfig::ic_decay);
    t["t_end"] = dbl(&RunConfig::t_end);
    t["dt_policy"] = str(&RunConfig::dt_policy);
    t["dt"] = dbl(&RunConfig::dt);
    t["safety"] = dbl(&RunConfig::safety);
    t["dt_max"] = dbl(&RunConfig::dt_max);
    t["max_steps"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.max_steps = parse_long(k, v); };
    t["sample_every"] = int_(&RunConfig::sample_every);
    t["s_list"] = dlist(&RunConfig::s_list);
    t["blowup_threshold"] = dbl(&RunConfig::blowup_threshold);
    t["out"] = str(&RunConfig::out);
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const long x = parse_long(k, v);
      if (x < 0) throw ConfigError("seed must be nonnegative");
      c.seed = std::uint64_t(x);
    };
    t["mu_list"] = dlist(&RunConfig::mu_list);
    t["picard_iterations"] = int_(&RunConfig::picard_iterations);
    t["refine_N"] = ilist(&RunConfig::refine_N);
    t["verify"] = [](RunConfig& c, const std::string&, const std::string& v) { c.verify = split_list(v); };
    t["verify_samples"] = size(&RunConfig::verify_samples);
    t["verify_s"] = dlist(&RunConfig::verify_s);
    t["verify_b"] = dlist(&RunConfig::verify_b);
    t["verify_dims"] = ilist(&RunConfig::verify_dims);
    t["sampler"] = str(&RunConfig::sampler);
    t["commutator_trials"] = size(&RunConfig::commutator_trials);
    t["commutator_N"] = int_(&RunConfig::commutator_N);
    t["eps"] = dbl(&RunConfig::eps);
    t["antisymmetry_fields"] = size(&RunConfig::antisymmetry_fields);
    t["antisymmetry_N"] = int_(&RunConfig::antisymmetry_N);
    return t;
  }();
  return table;
}

}  // namespace detail

/// Applies one `key = value` assignment; unknown keys are errors.
inline void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = detail::setters();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, detail::trim(value));
}

inline void apply_config_text(RunConfig& cfg, std::istream& in, const std::string& source = "<config>") {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      set_key(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig cfg;
  apply_config_text(cfg, in, path);
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  RunConfig cfg;
  apply_config_text(cfg, in);
  return cfg;
}

}  // namespace fpm
