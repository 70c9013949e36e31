#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "langfit/experiments.hpp"
#include "langfit/linear.hpp"
#include "langfit/rng.hpp"
#include "langfit/stats.hpp"

using namespace langfit;

namespace {

double hist_mass(const Histogram& h) {
  long double m = 0;
  for (std::size_t i = 0; i < h.densities.size(); ++i)
    m += static_cast<long double>(h.densities[i]) * (h.bin_edges[i + 1] - h.bin_edges[i]);
  return static_cast<double>(m);
}

double hist_density_at(const Histogram& h, double x) {
  for (std::size_t i = 0; i < h.densities.size(); ++i)
    if (x >= h.bin_edges[i] && x < h.bin_edges[i + 1]) return h.densities[i];
  return 0.0;
}

LangevinParams kramers_params() {
  LangevinParams p;
  p.gamma = 0.5;
  p.potential = PotentialSpec::kramers(1.0 / std::sqrt(10.0));
  p.sigma = 1.0;
  return p;
}

}  // namespace

TEST_CASE("histogram: uniform grid data, normalization, degenerate input") {
  std::vector<double> grid;
  for (int i = 0; i < 10000; ++i) grid.push_back(i / 9999.0);
  const Histogram h = empirical_pdf(grid, 10);
  CHECK(hist_mass(h) == doctest::Approx(1.0).epsilon(1e-12));
  for (double d : h.densities) CHECK(d == doctest::Approx(1.0).epsilon(0.01));

  CHECK_THROWS_AS(empirical_pdf(std::vector<double>(500, 3.14), 10), std::runtime_error);
  CHECK_THROWS_AS(empirical_pdf(grid, 2000), std::invalid_argument);
}

TEST_CASE("histogram normalization holds for arbitrary data") {
  Rng rng(8);
  std::vector<double> data;
  for (int i = 0; i < 50000; ++i) data.push_back(std::exp(rng.normal()));
  const Histogram h = empirical_pdf(data, 81);
  CHECK(hist_mass(h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("long linear-Langevin series matches the Gaussian stationary density") {
  ExperimentConfig config;
  config.model.family = "quadratic";
  config.sim.T = 31250.0;
  config.sim.burn_in = 50.0;
  config.obs.h = 1.0 / 32.0;
  const ObservationSeries obs = generate_dataset(config, 12);
  const Histogram h = empirical_pdf(obs.values, 81);
  // stationary x ~ N(0, 0.25)
  double sup = 0.0;
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    const double mid = 0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]);
    const double ref = std::exp(-mid * mid / 0.5) / std::sqrt(0.5 * M_PI);
    sup = std::max(sup, std::abs(h.densities[i] - ref));
  }
  CHECK(sup <= 0.05);
}

TEST_CASE("ACF: unit lag zero, iid noise, reversal symmetry") {
  Rng rng(4);
  std::vector<double> iid;
  for (int i = 0; i < 40000; ++i) iid.push_back(rng.normal());
  const AcfCurve acf = empirical_acf(iid, 20);
  CHECK(acf.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  const double band = 3.0 / std::sqrt(40000.0);
  for (int k = 1; k <= 20; ++k) {
    CHECK(std::abs(acf.values[static_cast<std::size_t>(k)]) <= band);
    CHECK(std::abs(acf.values[static_cast<std::size_t>(k)]) <= 1.0 + 1e-12);
  }

  std::vector<double> rev(iid.rbegin(), iid.rend());
  const AcfCurve racf = empirical_acf(rev, 20);
  for (int k = 0; k <= 20; ++k)
    CHECK(racf.values[static_cast<std::size_t>(k)] ==
          doctest::Approx(acf.values[static_cast<std::size_t>(k)]).epsilon(1e-12));

  CHECK_THROWS_AS(empirical_acf(std::vector<double>(1000, 1.0), 10), std::runtime_error);
}

TEST_CASE("linear-Langevin ACF matches the analytic autocorrelation") {
  ExperimentConfig config;
  config.model.family = "quadratic";
  config.sim.T = 31250.0;
  config.sim.burn_in = 50.0;
  config.obs.h = 1.0 / 32.0;
  const ObservationSeries obs = generate_dataset(config, 13);
  const AcfCurve acf = empirical_acf(obs.values, 200);
  const std::vector<double> g = stationary_autocov(0.5, 4.0, 1.0, 1.0 / 32.0, 200);
  for (int k = 0; k <= 200; ++k)
    CHECK(std::abs(acf.values[static_cast<std::size_t>(k)] - g[static_cast<std::size_t>(k)] / g[0]) <= 0.03);
}

TEST_CASE("Kramers stationary x-marginal: symmetry, modes, narrow-grid warning") {
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(-2.0 + 4.0 * i / 2000.0);
  const DensityCurve d = kramers_stationary_pdf_x(kramers_params(), grid);
  CHECK_FALSE(d.narrow_grid);

  long double mass = 0;
  for (std::size_t i = 1; i < d.grid.size(); ++i)
    mass += 0.5L * (d.density[i] + d.density[i - 1]) * (d.grid[i] - d.grid[i - 1]);
  CHECK(static_cast<double>(mass) == doctest::Approx(1.0).epsilon(1e-12));

  // even potential on a symmetric grid
  for (std::size_t i = 0; i < d.grid.size() / 2; ++i)
    CHECK(d.density[i] == doctest::Approx(d.density[d.grid.size() - 1 - i]).epsilon(1e-9));

  // density peaks exactly at the wells x = +-beta
  const double beta = 1.0 / std::sqrt(10.0);
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < d.density.size(); ++i)
    if (d.density[i] > d.density[argmax]) argmax = i;
  CHECK(std::abs(std::abs(d.grid[argmax]) - beta) < 0.01);
  // wells sit above the origin between them
  const double at0 = d.density[1000];
  CHECK(d.density[argmax] > at0);

  std::vector<double> tight;
  for (int i = 0; i <= 100; ++i) tight.push_back(-0.4 + 0.8 * i / 100.0);
  CHECK(kramers_stationary_pdf_x(kramers_params(), tight).narrow_grid);
}

TEST_CASE("long Kramers simulation matches the analytic marginal") {
  ExperimentConfig config;
  config.model.family = "kramers";
  config.sim.T = 9765.625;  // 1e7 integrator steps at dt = 1/1024
  config.sim.burn_in = 100.0;
  config.obs.h = 1.0 / 64.0;
  const ObservationSeries obs = generate_dataset(config, 14);
  const Histogram h = empirical_pdf(obs.values, 81);

  std::vector<double> centers;
  for (std::size_t i = 0; i < h.densities.size(); ++i)
    centers.push_back(0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]));
  const DensityCurve ref = kramers_stationary_pdf_x(kramers_params(), centers);
  double sup = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    sup = std::max(sup, std::abs(h.densities[i] - ref.density[i]));
  CHECK(sup <= 0.05);
}

TEST_CASE("fitted NARMA long run reproduces the bimodal stationary density") {
  ExperimentConfig config;
  config.model.family = "kramers";
  config.sim.T = 2048.0;
  config.sim.burn_in = 50.0;
  config.obs.h = 1.0 / 32.0;
  const ObservationSeries data = generate_dataset(config, 15);
  const NarmaFit fit = fit_narma({NarmaStructure::M3, 0}, data);

  Rng rng(77);
  const std::vector<double> path =
      simulate_narma(fit.model, 1000000, {data.values[0], data.values[1]}, rng);
  const Histogram h = empirical_pdf(path, 81);
  std::vector<double> centers;
  for (std::size_t i = 0; i < h.densities.size(); ++i)
    centers.push_back(0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]));
  const DensityCurve ref = kramers_stationary_pdf_x(kramers_params(), centers);
  double sup = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    sup = std::max(sup, std::abs(h.densities[i] - ref.density[i]));
  CHECK(sup <= 0.05);

  // spread of the simulated model matches the data spread
  long double s = 0, ss = 0;
  for (double v : path) {
    s += v;
    ss += static_cast<long double>(v) * v;
  }
  const double var = static_cast<double>(ss / static_cast<long double>(path.size())) -
                     static_cast<double>(s / static_cast<long double>(path.size())) *
                         static_cast<double>(s / static_cast<long double>(path.size()));
  CHECK(std::sqrt(var) == doctest::Approx(0.493).epsilon(0.05));
}
