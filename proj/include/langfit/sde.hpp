#pragma once

#include <cstdint>
#include <vector>

#include "langfit/model.hpp"
#include "langfit/rng.hpp"

namespace langfit {

// Per-step stochastic increments of the integrators:
//   w = sigma*(B_{t+h} - B_t),  z = sigma*Int_t^{t+h} (B_s - B_t) ds
// with exact joint moments Var(w) = sigma^2 h, Var(z) = sigma^2 h^3/3,
// Cov(w, z) = sigma^2 h^2/2.
struct NoisePair {
  double w = 0.0;
  double z = 0.0;
};

NoisePair sample_noise_pair(double sigma, double h, Rng& rng);

// a(x, y) = -gamma*y - V'(x)
double drift_a(const LangevinParams& params, const PhaseState& state);

enum class Scheme { EM, IT2 };

PhaseState step_em(const LangevinParams& params, const PhaseState& state, double dt,
                   const NoisePair& noise);
PhaseState step_it2(const LangevinParams& params, const PhaseState& state, double dt,
                    const NoisePair& noise);

struct SimConfig {
  double dt = 1.0 / 1024.0;
  std::uint64_t n_steps = 1024;
  std::uint64_t seed = 0;
  PhaseState initial{0.5, 0.5};
  Scheme scheme = Scheme::IT2;
  double burn_in = 0.0;  // time units discarded before recording
};

// Discretely observed positions x_{nh}, n = 1..N.
struct ObservationSeries {
  double h = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Integrates n_steps steps from config.initial (after discarding burn_in)
// and records every (obs_h/dt)-th x value. obs_h must be an integer
// multiple of dt. Deterministic given config.seed. If full_path is
// non-null it receives the state after every recorded-phase step.
ObservationSeries simulate_and_observe(const LangevinParams& params, const SimConfig& config,
                                       double obs_h, std::vector<PhaseState>* full_path = nullptr);

}  // namespace langfit
