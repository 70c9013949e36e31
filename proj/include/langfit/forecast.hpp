#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "langfit/model.hpp"
#include "langfit/narma.hpp"
#include "langfit/sde.hpp"

namespace langfit {

struct SdePredictor {
  LangevinParams params;
  Scheme scheme = Scheme::IT2;
  double dt_solve = 1.0 / 64.0;  // must divide the observation spacing
};

struct NarmaPredictor {
  NarmaModel model;
};

using Predictor = std::variant<SdePredictor, NarmaPredictor>;

struct ForecastConfig {
  int n_pieces = 1000;     // N0
  int ensemble_size = 20;  // N_ens
  int horizon = 120;       // K, observations per piece
  int init_len = 5;        // m; 2*max(p,q)+1 when a NARMA predictor is present

  void validate() const;
};

// Non-overlapping K-length windows: piece i covers observation indices
// K*i+1 .. K*i+K (1-based), i = 1..N0.
std::vector<std::vector<double>> make_pieces(const ObservationSeries& obs,
                                             const ForecastConfig& config);

// Member trajectories for one piece: members[k][j], k = 1..K (0-based rows),
// j over surviving members. The first m rows equal the observed values for
// every member. Diverged NARMA members are excluded and counted.
struct EnsembleResult {
  std::vector<std::vector<double>> members;  // K x n_members
  std::vector<double> mean;                  // K
  int diverged = 0;
};

EnsembleResult ensemble_forecast(const Predictor& predictor, const std::vector<double>& piece,
                                 double h, const ForecastConfig& config, std::uint64_t seed);

// RMSE(kh) over pieces of the ensemble-mean forecast; exactly 0 for k <= m.
struct RmseCurve {
  std::vector<double> values;  // k = 1..K
  ForecastConfig config;
  double h = 0.0;
  long diverged_members = 0;
};

RmseCurve rmse_curve(const std::vector<std::vector<double>>& piece_means,
                     const std::vector<std::vector<double>>& pieces, double h,
                     const ForecastConfig& config);

// Runs every predictor over the same piece partition with independent shock
// streams; curves are aligned for comparison.
std::vector<RmseCurve> forecast_experiment(const ObservationSeries& obs,
                                           const std::vector<Predictor>& predictors,
                                           const ForecastConfig& config, std::uint64_t base_seed,
                                           int workers = 1);

}  // namespace langfit
