#include "langfit/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace langfit {

NoisePair sample_noise_pair(double sigma, double h, Rng& rng) {
  const double xi = rng.normal();
  const double eta = rng.normal();
  NoisePair n;
  n.w = sigma * std::sqrt(h) * xi;
  // h^(3/2)/2 scaling gives the exact Var(z) = sigma^2 h^3/3, Cov(w,z) = sigma^2 h^2/2.
  n.z = sigma * (0.5 * std::pow(h, 1.5)) * (xi + eta / std::sqrt(3.0));
  return n;
}

double drift_a(const LangevinParams& params, const PhaseState& state) {
  return -params.gamma * state.y - params.potential.vprime(state.x);
}

PhaseState step_em(const LangevinParams& params, const PhaseState& state, double dt,
                   const NoisePair& noise) {
  PhaseState next;
  next.x = state.x + state.y * dt;
  next.y = state.y + dt * drift_a(params, state) + noise.w;
  return next;
}

PhaseState step_it2(const LangevinParams& params, const PhaseState& state, double dt,
                    const NoisePair& noise) {
  // Order-2.0 Ito-Taylor update specialized to a(x,y) = -gamma*y - V'(x)
  // (a_y = -gamma, a_yy = 0).
  const double g = params.gamma;
  const double vp = params.potential.vprime(state.x);
  const double vpp = params.potential.vsecond(state.x);
  const double c1 = 1.0 - 0.5 * g * dt;
  PhaseState next;
  next.x = state.x + dt * c1 * state.y - 0.5 * dt * dt * vp + noise.z;
  next.y = state.y * (1.0 - g * dt + 0.5 * g * g * dt * dt - 0.5 * dt * dt * vpp) -
           dt * c1 * vp + noise.w - g * noise.z;
  return next;
}

ObservationSeries simulate_and_observe(const LangevinParams& params, const SimConfig& config,
                                       double obs_h, std::vector<PhaseState>* full_path) {
  params.validate();
  if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (config.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(obs_h > 0.0)) throw std::invalid_argument("observation spacing must be > 0");
  const double ratio = obs_h / config.dt;
  const auto stride = static_cast<std::uint64_t>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio)
    throw std::invalid_argument("observation spacing " + std::to_string(obs_h) +
                                " is not an integer multiple of dt " +
                                std::to_string(config.dt));

  Rng rng(config.seed);
  PhaseState state = config.initial;

  const auto burn_steps =
      static_cast<std::uint64_t>(std::llround(std::max(0.0, config.burn_in) / config.dt));
  auto advance = [&](const PhaseState& s) {
    const NoisePair noise = sample_noise_pair(params.sigma, config.dt, rng);
    return config.scheme == Scheme::EM ? step_em(params, s, config.dt, noise)
                                       : step_it2(params, s, config.dt, noise);
  };
  for (std::uint64_t i = 0; i < burn_steps; ++i) state = advance(state);

  ObservationSeries obs;
  obs.h = obs_h;
  obs.values.reserve(config.n_steps / stride);
  if (full_path) {
    full_path->clear();
    full_path->reserve(config.n_steps);
  }
  for (std::uint64_t i = 1; i <= config.n_steps; ++i) {
    state = advance(state);
    if (!std::isfinite(state.x) || !std::isfinite(state.y))
      throw std::runtime_error("trajectory diverged at step " + std::to_string(i));
    if (full_path) full_path->push_back(state);
    if (i % stride == 0) obs.values.push_back(state.x);
  }
  return obs;
}

}  // namespace langfit
