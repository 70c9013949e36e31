#include "langfit/forecast.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "langfit/parallel.hpp"

namespace langfit {

void ForecastConfig::validate() const {
  if (n_pieces < 1) throw std::invalid_argument("forecast: n_pieces must be >= 1");
  if (ensemble_size < 1) throw std::invalid_argument("forecast: ensemble_size must be >= 1");
  if (init_len < 2) throw std::invalid_argument("forecast: init_len must be >= 2");
  if (horizon <= init_len) throw std::invalid_argument("forecast: horizon must exceed init_len");
}

std::vector<std::vector<double>> make_pieces(const ObservationSeries& obs,
                                             const ForecastConfig& config) {
  config.validate();
  const std::size_t k = static_cast<std::size_t>(config.horizon);
  const std::size_t need = k * (static_cast<std::size_t>(config.n_pieces) + 1);
  if (obs.size() < need) {
    const long max_n0 = static_cast<long>(obs.size() / k) - 1;
    throw std::invalid_argument("make_pieces: " + std::to_string(obs.size()) +
                                " observations cannot hold " + std::to_string(config.n_pieces) +
                                " pieces of length " + std::to_string(k) +
                                " (max feasible n_pieces = " + std::to_string(std::max(0L, max_n0)) +
                                ")");
  }
  std::vector<std::vector<double>> pieces;
  pieces.reserve(static_cast<std::size_t>(config.n_pieces));
  for (int i = 1; i <= config.n_pieces; ++i) {
    const std::size_t start = k * static_cast<std::size_t>(i);
    pieces.emplace_back(obs.values.begin() + static_cast<long>(start),
                        obs.values.begin() + static_cast<long>(start + k));
  }
  return pieces;
}

namespace {

void check_narma_init_len(const NarmaModel& model, const ForecastConfig& config) {
  const int want = 2 * std::max(NarmaSpec::p, model.spec.q) + 1;
  if (config.init_len != want)
    throw std::invalid_argument("forecast: init_len must be 2*max(p,q)+1 = " +
                                std::to_string(want) + " for NARMA predictors");
}

std::vector<double> sde_member(const SdePredictor& pred, const std::vector<double>& piece,
                               double h, int m, int horizon, Rng& rng) {
  const double ratio = h / pred.dt_solve;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio)
    throw std::invalid_argument("forecast: dt_solve must divide the observation spacing");

  PhaseState state;
  state.x = piece[m - 1];
  state.y = (piece[m - 1] - piece[m - 2]) / h;

  std::vector<double> traj;
  traj.reserve(static_cast<std::size_t>(horizon - m));
  for (int k = m; k < horizon; ++k) {
    for (std::size_t s = 0; s < stride; ++s) {
      const NoisePair noise = sample_noise_pair(pred.params.sigma, pred.dt_solve, rng);
      state = pred.scheme == Scheme::EM ? step_em(pred.params, state, pred.dt_solve, noise)
                                        : step_it2(pred.params, state, pred.dt_solve, noise);
    }
    traj.push_back(state.x);
  }
  return traj;
}

}  // namespace

EnsembleResult ensemble_forecast(const Predictor& predictor, const std::vector<double>& piece,
                                 double h, const ForecastConfig& config, std::uint64_t seed) {
  config.validate();
  const int m = config.init_len;
  const int horizon = config.horizon;
  if (piece.size() < static_cast<std::size_t>(horizon))
    throw std::invalid_argument("forecast: piece shorter than the horizon");
  if (const auto* np = std::get_if<NarmaPredictor>(&predictor)) check_narma_init_len(np->model, config);

  EnsembleResult result;
  result.members.assign(static_cast<std::size_t>(horizon), {});

  for (int j = 0; j < config.ensemble_size; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    std::vector<double> tail;  // values for k = m+1..K
    if (const auto* sp = std::get_if<SdePredictor>(&predictor)) {
      tail = sde_member(*sp, piece, h, m, horizon, rng);
    } else {
      const auto& np = std::get<NarmaPredictor>(predictor);
      const std::vector<double> init(piece.begin(), piece.begin() + m);
      try {
        tail = simulate_narma(np.model, static_cast<std::size_t>(horizon - m), init, rng);
      } catch (const InstabilityError&) {
        ++result.diverged;
        continue;
      }
    }
    for (int k = 0; k < m; ++k) result.members[k].push_back(piece[k]);
    for (int k = m; k < horizon; ++k)
      result.members[k].push_back(tail[k - m]);
  }

  if (result.members[0].empty())
    throw std::runtime_error("forecast: every ensemble member diverged");
  result.mean.resize(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    long double s = 0.0L;
    for (double v : result.members[k]) s += v;
    result.mean[k] =
        static_cast<double>(s / static_cast<long double>(result.members[k].size()));
  }
  return result;
}

RmseCurve rmse_curve(const std::vector<std::vector<double>>& piece_means,
                     const std::vector<std::vector<double>>& pieces, double h,
                     const ForecastConfig& config) {
  if (piece_means.size() != pieces.size())
    throw std::invalid_argument("rmse_curve: forecast/piece count mismatch");
  if (pieces.empty()) throw std::invalid_argument("rmse_curve: no pieces");
  const std::size_t horizon = static_cast<std::size_t>(config.horizon);
  for (const auto& v : piece_means)
    if (v.size() != horizon) throw std::invalid_argument("rmse_curve: mismatched configs");

  RmseCurve curve;
  curve.config = config;
  curve.h = h;
  curve.values.assign(horizon, 0.0);
  for (std::size_t k = static_cast<std::size_t>(config.init_len); k < horizon; ++k) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double d = piece_means[i][k] - pieces[i][k];
      s += static_cast<long double>(d) * d;
    }
    curve.values[k] = std::sqrt(static_cast<double>(s / static_cast<long double>(pieces.size())));
  }
  return curve;
}

std::vector<RmseCurve> forecast_experiment(const ObservationSeries& obs,
                                           const std::vector<Predictor>& predictors,
                                           const ForecastConfig& config, std::uint64_t base_seed,
                                           int workers) {
  const std::vector<std::vector<double>> pieces = make_pieces(obs, config);
  std::vector<RmseCurve> curves;
  curves.reserve(predictors.size());
  for (std::size_t l = 0; l < predictors.size(); ++l) {
    const std::uint64_t pred_seed = derive_seed(base_seed, l);
    std::vector<std::vector<double>> means(pieces.size());
    std::vector<long> diverged(pieces.size(), 0);
    parallel_for(pieces.size(), workers, [&](std::size_t i) {
      EnsembleResult r =
          ensemble_forecast(predictors[l], pieces[i], obs.h, config, derive_seed(pred_seed, i));
      means[i] = std::move(r.mean);
      diverged[i] = r.diverged;
    });
    RmseCurve curve = rmse_curve(means, pieces, obs.h, config);
    for (long d : diverged) curve.diverged_members += d;
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace langfit
