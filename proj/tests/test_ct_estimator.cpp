#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "langfit/contrast.hpp"
#include "langfit/experiments.hpp"
#include "langfit/nelder_mead.hpp"
#include "langfit/sde.hpp"

using namespace langfit;

namespace {

ObservationSeries series(double h, std::vector<double> values) {
  ObservationSeries obs;
  obs.h = h;
  obs.values = std::move(values);
  return obs;
}

ObservationSeries simulate(const std::string& family, double T, double h, std::uint64_t seed) {
  ExperimentConfig config;
  config.model.family = family;
  config.sim.T = T;
  config.sim.burn_in = 0.0;
  config.obs.h = h;
  return generate_dataset(config, seed);
}

}  // namespace

TEST_CASE("velocity proxy: constants, exact linear motion, telescoping mean") {
  const ObservationSeries flat = series(0.5, {1.0, 1.0, 1.0, 1.0});
  for (double v : velocity_proxy(flat)) CHECK(v == 0.0);

  const double v = -0.75, h = 0.25;
  std::vector<double> ramp;
  for (int n = 1; n <= 6; ++n) ramp.push_back(v * n * h);
  for (double y : velocity_proxy(series(h, ramp))) CHECK(y == doctest::Approx(v).epsilon(1e-12));

  const ObservationSeries obs = simulate("quadratic", 4.0, 1.0 / 16.0, 77);
  const std::vector<double> yhat = velocity_proxy(obs);
  double mean = 0.0;
  for (double y : yhat) mean += y;
  mean /= static_cast<double>(yhat.size());
  const double expected = (obs.values.back() - obs.values.front()) /
                          (static_cast<double>(obs.size() - 1) * obs.h);
  CHECK(mean == doctest::Approx(expected).epsilon(1e-10));

  CHECK_THROWS_AS(velocity_proxy(series(0.5, {1.0})), std::invalid_argument);
}

TEST_CASE("contrast value: log term vanishes at sigma2 = 1, zero-residual data") {
  const ObservationSeries obs = simulate("quadratic", 2.0, 1.0 / 32.0, 3);
  ContrastTheta theta{0.4, 3.5, 1.0};
  const double value = contrast_value(theta, PotentialKind::Quadratic, obs);

  // recompute the weighted residual sum directly
  const std::vector<double> yhat = velocity_proxy(obs);
  long double rss = 0;
  for (std::size_t i = 0; i + 3 < obs.size(); ++i) {
    const double r =
        yhat[i + 2] - yhat[i + 1] + obs.h * (theta.gamma * yhat[i] + theta.drift2 * obs.values[i]);
    rss += static_cast<long double>(r) * r;
  }
  CHECK(value == doctest::Approx(1.5 * static_cast<double>(rss) / obs.h).epsilon(1e-12));

  // identically-zero data has zero residuals for every theta
  const ObservationSeries zeros = series(0.25, std::vector<double>(16, 0.0));
  for (double s2 : {0.3, 1.0, 4.0}) {
    ContrastTheta t{1.2, 2.0, s2};
    CHECK(contrast_value(t, PotentialKind::Quadratic, zeros) ==
          doctest::Approx(13.0 * std::log(s2)).epsilon(1e-12));
  }
}

TEST_CASE("profile formula minimizes the contrast over sigma2") {
  const ObservationSeries obs = simulate("quadratic", 4.0, 1.0 / 32.0, 9);
  const ContrastFit fit = fit_contrast(obs, PotentialKind::Quadratic);
  const double at_profile = contrast_value(fit.theta, PotentialKind::Quadratic, obs);
  for (double f : {0.5, 0.9, 1.1, 2.0}) {
    ContrastTheta t = fit.theta;
    t.sigma2 *= f;
    CHECK(contrast_value(t, PotentialKind::Quadratic, obs) >= at_profile);
  }
  CHECK(fit.theta.sigma2 ==
        doctest::Approx(3.0 * fit.residual_sum / (2.0 * obs.h * fit.n_used)).epsilon(1e-12));
  CHECK(fit.n_used == static_cast<long>(obs.size()) - 3);
}

TEST_CASE("closed-form fit is the global minimizer (simplex cannot improve it)") {
  for (const char* family : {"quadratic", "kramers"}) {
    const PotentialKind kind =
        family[0] == 'q' ? PotentialKind::Quadratic : PotentialKind::KramersForm;
    const ObservationSeries obs = simulate(family, 200.0, 1.0 / 16.0, 21);
    const ContrastFit fit = fit_contrast(obs, kind);
    const double best = contrast_value(fit.theta, kind, obs);

    auto objective = [&](const std::vector<double>& v) {
      if (v[2] <= 0.0 || (kind == PotentialKind::KramersForm && v[1] <= 0.0)) return 1e300;
      return contrast_value({v[0], v[1], v[2]}, kind, obs);
    };
    NelderMeadOptions opts;
    opts.max_iter = 20000;
    opts.ftol_rel = 1e-14;
    const NelderMeadResult res =
        nelder_mead(objective, {fit.theta.gamma, fit.theta.drift2, fit.theta.sigma2},
                    {1e-3, 1e-3, 1e-4}, opts);
    CHECK(best - res.fval <= 1e-8 * std::abs(best));
  }
}

TEST_CASE("degenerate and out-of-domain data are reported") {
  CHECK_THROWS_AS(fit_contrast(series(0.5, std::vector<double>(32, 1.0)), PotentialKind::Quadratic),
                  std::runtime_error);
  CHECK_THROWS_AS(fit_contrast(series(0.5, {1.0, 2.0}), PotentialKind::Quadratic),
                  std::invalid_argument);

  // build data whose velocity-increment carries an exact +5 h x^3 signature,
  // so the least-squares beta^-2 estimate is -5
  const double h = 0.1;
  std::vector<double> anti{0.5, 0.6, 0.7};
  for (int n = 0; n < 9; ++n) {
    const std::size_t k = anti.size();
    anti.push_back(2.0 * anti[k - 1] - anti[k - 2] + 5.0 * h * h * std::pow(anti[k - 3], 3));
  }
  bool caught = false;
  try {
    fit_contrast(series(h, anti), PotentialKind::KramersForm);
  } catch (const EstimateOutOfDomain& e) {
    caught = true;
    CHECK(e.raw_value == doctest::Approx(-5.0).epsilon(1e-6));
  }
  CHECK(caught);
}

TEST_CASE("estimates land near the replicate-mean values at reduced scale") {
  // linear truth (0.5, 4, 1): desk-scale check against the large-replicate
  // means (0.7313, 3.8917, 0.9879) at h = 1/32; Kramers against
  // (0.8726, 0.3501)
  const int reps = 4;
  double g_sum = 0, a_sum = 0, s_sum = 0, gk_sum = 0, bk_sum = 0;
  for (int r = 0; r < reps; ++r) {
    const ObservationSeries lin = simulate("quadratic", 1500.0, 1.0 / 32.0, 100 + r);
    const ContrastFit fit = fit_contrast(lin, PotentialKind::Quadratic);
    g_sum += fit.theta.gamma;
    a_sum += fit.theta.drift2;
    s_sum += std::sqrt(fit.theta.sigma2);

    const ObservationSeries kra = simulate("kramers", 1500.0, 1.0 / 32.0, 200 + r);
    const ContrastFit kfit = fit_contrast(kra, PotentialKind::KramersForm);
    gk_sum += kfit.theta.gamma;
    bk_sum += kfit.theta.drift2;
  }
  CHECK(g_sum / reps == doctest::Approx(0.7313).epsilon(0.08));
  CHECK(a_sum / reps == doctest::Approx(3.8917).epsilon(0.03));
  CHECK(s_sum / reps == doctest::Approx(0.9879).epsilon(0.02));
  CHECK(gk_sum / reps == doctest::Approx(0.8726).epsilon(0.08));
  CHECK(bk_sum / reps == doctest::Approx(0.3501).epsilon(0.03));
}

TEST_CASE("gamma-hat bias grows with the observation spacing in both families") {
  for (const char* family : {"quadratic", "kramers"}) {
    const PotentialKind kind =
        family[0] == 'q' ? PotentialKind::Quadratic : PotentialKind::KramersForm;
    double prev = -1e9;
    for (int factor : {1, 2, 4}) {
      double mean = 0.0;
      const int reps = 4;
      for (int r = 0; r < reps; ++r) {
        const ObservationSeries fine = simulate(family, 1500.0, 1.0 / 32.0, 300 + r);
        const ObservationSeries obs = factor == 1 ? fine : subsample(fine, factor);
        mean += fit_contrast(obs, kind).theta.gamma;
      }
      mean /= reps;
      CHECK(mean > prev);
      prev = mean;
    }
  }
}
