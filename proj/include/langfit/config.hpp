#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "langfit/model.hpp"
#include "langfit/narma.hpp"
#include "langfit/sde.hpp"

namespace langfit {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg, std::vector<std::string> violated = {})
      : std::runtime_error(msg), violations(std::move(violated)) {}
  std::vector<std::string> violations;
};

// Flat `key = value` configuration with dotted keys; desk-scale defaults.
struct ExperimentConfig {
  struct Model {
    std::string family = "kramers";  // quadratic | kramers
    double gamma = 0.5;
    double alpha = 4.0;              // quadratic family
    double beta = 0.316227766016837933;  // kramers family, 1/sqrt(10)
    double sigma = 1.0;
  } model;
  struct Sim {
    double dt = 1.0 / 1024.0;
    double T = 1e4;
    double burn_in = 1000.0;
    std::uint64_t seed = 20260809;
    std::string scheme = "it2";  // em | it2
    double x0 = 0.5;
    double y0 = 0.5;
  } sim;
  struct Obs {
    double h = 1.0 / 32.0;
  } obs;
  struct Fit {
    std::string method = "narma";  // ct | narma
    std::string structure = "M3";  // ARMA | M1..M4
    int q = 0;
    int restarts = 5;
  } fit;
  struct Forecast {
    int N0 = 1000;
    int N_ens = 20;
    int K = 120;
    double dt_solve = 1.0 / 64.0;
  } forecast;
  struct Replicate {
    int n_datasets = 20;
  } replicate;

  LangevinParams langevin_params() const;
  Scheme scheme() const;
  NarmaSpec narma_spec() const;

  // collects every violated constraint by name; throws ConfigError when any
  void validate() const;
};

// Parses `key = value` lines ('#' comments allowed); unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Applies one `key=value` override (the --set flag).
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Resolved config echo for manifest.txt; parseable by parse_config.
std::string dump_config(const ExperimentConfig& config);

}  // namespace langfit
