#include "langfit/config.hpp"

#include <cmath>
#include <sstream>

#include "langfit/io.hpp"

namespace langfit {

LangevinParams ExperimentConfig::langevin_params() const {
  LangevinParams p;
  p.gamma = model.gamma;
  p.sigma = model.sigma;
  const PotentialKind kind = potential_kind_from_string(model.family);
  if (kind == PotentialKind::Quadratic)
    p.potential = PotentialSpec::quadratic(model.alpha);
  else if (kind == PotentialKind::KramersForm)
    p.potential = PotentialSpec::kramers(model.beta);
  else
    p.potential = PotentialSpec::double_well(model.alpha, model.beta);
  return p;
}

Scheme ExperimentConfig::scheme() const {
  if (sim.scheme == "em") return Scheme::EM;
  if (sim.scheme == "it2") return Scheme::IT2;
  throw ConfigError("sim.scheme must be em or it2, got " + sim.scheme);
}

NarmaSpec ExperimentConfig::narma_spec() const {
  NarmaSpec spec;
  spec.structure = narma_structure_from_string(fit.structure);
  spec.q = fit.q;
  return spec;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const std::string& name) {
    if (!ok) bad.push_back(name);
  };
  check(model.gamma > 0.0, "model.gamma > 0");
  check(model.sigma > 0.0, "model.sigma > 0");
  check(model.family == "quadratic" || model.family == "kramers" || model.family == "double_well",
        "model.family in {quadratic, kramers, double_well}");
  if (model.family == "quadratic") check(model.alpha > 0.0, "model.alpha > 0");
  if (model.family == "kramers") check(model.beta > 0.0, "model.beta > 0");
  check(sim.dt > 0.0, "sim.dt > 0");
  check(sim.T > 0.0, "sim.T > 0");
  check(sim.burn_in >= 0.0, "sim.burn_in >= 0");
  check(sim.scheme == "em" || sim.scheme == "it2", "sim.scheme in {em, it2}");
  check(obs.h > 0.0, "obs.h > 0");
  if (sim.dt > 0.0 && obs.h > 0.0) {
    const double ratio = obs.h / sim.dt;
    check(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && ratio >= 1.0,
          "obs.h integer multiple of sim.dt");
  }
  check(fit.method == "ct" || fit.method == "narma", "fit.method in {ct, narma}");
  check(fit.q >= 0, "fit.q >= 0");
  if (fit.method == "narma") {
    try {
      narma_spec().validate();
    } catch (const std::exception& e) {
      bad.push_back(std::string("fit.structure/fit.q: ") + e.what());
    }
  }
  check(fit.restarts >= 1, "fit.restarts >= 1");
  check(forecast.N0 >= 1, "forecast.N0 >= 1");
  check(forecast.N_ens >= 1, "forecast.N_ens >= 1");
  check(forecast.K >= 2, "forecast.K >= 2");
  check(forecast.dt_solve > 0.0, "forecast.dt_solve > 0");
  if (forecast.dt_solve > 0.0 && obs.h > 0.0) {
    const double ratio = obs.h / forecast.dt_solve;
    check(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && ratio >= 1.0,
          "forecast.dt_solve divides obs.h");
  }
  if (obs.h > 0.0 && sim.T > 0.0)
    check(static_cast<double>(forecast.K) * (forecast.N0 + 1.0) * obs.h <= sim.T / 2.0,
          "forecast capacity: K*(N0+1)*h <= T/2");
  check(replicate.n_datasets >= 2, "replicate.n_datasets >= 2");

  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& s : bad) msg += "\n  violated: " + s;
    throw ConfigError(msg, bad);
  }
}

namespace {

struct Trimmed {
  static std::string apply(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  }
};

void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  auto num = [&] {
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (Trimmed::apply(value.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ConfigError("config key " + key + " expects a number, got '" + value + "'");
  };
  auto integer = [&] {
    const double v = num();
    if (std::abs(v - std::round(v)) > 0) throw ConfigError("config key " + key + " expects an integer");
    return static_cast<int>(std::llround(v));
  };

  if (key == "model.family") c.model.family = value;
  else if (key == "model.gamma") c.model.gamma = num();
  else if (key == "model.alpha") c.model.alpha = num();
  else if (key == "model.beta") c.model.beta = num();
  else if (key == "model.sigma") c.model.sigma = num();
  else if (key == "sim.dt") c.sim.dt = num();
  else if (key == "sim.T") c.sim.T = num();
  else if (key == "sim.burn_in") c.sim.burn_in = num();
  else if (key == "sim.seed") c.sim.seed = static_cast<std::uint64_t>(std::stoull(value));
  else if (key == "sim.scheme") c.sim.scheme = value;
  else if (key == "sim.x0") c.sim.x0 = num();
  else if (key == "sim.y0") c.sim.y0 = num();
  else if (key == "obs.h") c.obs.h = num();
  else if (key == "fit.method") c.fit.method = value;
  else if (key == "fit.structure") c.fit.structure = value;
  else if (key == "fit.q") c.fit.q = integer();
  else if (key == "fit.restarts") c.fit.restarts = integer();
  else if (key == "forecast.N0") c.forecast.N0 = integer();
  else if (key == "forecast.N_ens") c.forecast.N_ens = integer();
  else if (key == "forecast.K") c.forecast.K = integer();
  else if (key == "forecast.dt_solve") c.forecast.dt_solve = num();
  else if (key == "replicate.n_datasets") c.replicate.n_datasets = integer();
  else throw ConfigError("unknown config key: " + key);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trimmed::apply(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + " is not key = value: " + line);
    set_key(config, Trimmed::apply(line.substr(0, eq)), Trimmed::apply(line.substr(eq + 1)));
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  set_key(config, Trimmed::apply(assignment.substr(0, eq)),
          Trimmed::apply(assignment.substr(eq + 1)));
}

std::string dump_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "model.family = " << c.model.family << '\n';
  out << "model.gamma = " << format_double(c.model.gamma) << '\n';
  out << "model.alpha = " << format_double(c.model.alpha) << '\n';
  out << "model.beta = " << format_double(c.model.beta) << '\n';
  out << "model.sigma = " << format_double(c.model.sigma) << '\n';
  out << "sim.dt = " << format_double(c.sim.dt) << '\n';
  out << "sim.T = " << format_double(c.sim.T) << '\n';
  out << "sim.burn_in = " << format_double(c.sim.burn_in) << '\n';
  out << "sim.seed = " << c.sim.seed << '\n';
  out << "sim.scheme = " << c.sim.scheme << '\n';
  out << "sim.x0 = " << format_double(c.sim.x0) << '\n';
  out << "sim.y0 = " << format_double(c.sim.y0) << '\n';
  out << "obs.h = " << format_double(c.obs.h) << '\n';
  out << "fit.method = " << c.fit.method << '\n';
  out << "fit.structure = " << c.fit.structure << '\n';
  out << "fit.q = " << c.fit.q << '\n';
  out << "fit.restarts = " << c.fit.restarts << '\n';
  out << "forecast.N0 = " << c.forecast.N0 << '\n';
  out << "forecast.N_ens = " << c.forecast.N_ens << '\n';
  out << "forecast.K = " << c.forecast.K << '\n';
  out << "forecast.dt_solve = " << format_double(c.forecast.dt_solve) << '\n';
  out << "replicate.n_datasets = " << c.replicate.n_datasets << '\n';
  return out.str();
}

}  // namespace langfit
