#include "langfit/contrast.hpp"

#include <cmath>
#include <string>

namespace langfit {

namespace {

void check_family(PotentialKind family) {
  if (family == PotentialKind::DoubleWell)
    throw std::invalid_argument(
        "contrast fitting supports the quadratic and Kramers families");
}

// Estimation-model drift derivative; see the header note on Kramers.
double est_vprime(PotentialKind family, double drift2, double x) {
  if (family == PotentialKind::Quadratic) return drift2 * x;
  return x * x * x / (drift2 * drift2);
}

}  // namespace

std::vector<double> velocity_proxy(const ObservationSeries& obs) {
  if (obs.size() < 2)
    throw std::invalid_argument("velocity_proxy needs at least 2 observations");
  if (!(obs.h > 0.0)) throw std::invalid_argument("observation spacing must be > 0");
  std::vector<double> yhat(obs.size() - 1);
  for (std::size_t i = 0; i + 1 < obs.size(); ++i)
    yhat[i] = (obs.values[i + 1] - obs.values[i]) / obs.h;
  return yhat;
}

double contrast_value(const ContrastTheta& theta, PotentialKind family,
                      const ObservationSeries& obs) {
  check_family(family);
  if (obs.size() < 4)
    throw std::invalid_argument("contrast needs at least 4 observations");
  if (!(theta.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
  const std::vector<double> yhat = velocity_proxy(obs);
  const double h = obs.h;
  const std::size_t n_used = obs.size() - 3;
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n_used; ++i) {
    const double r = yhat[i + 2] - yhat[i + 1] +
                     h * (theta.gamma * yhat[i] + est_vprime(family, theta.drift2, obs.values[i]));
    sum += static_cast<long double>(r) * r;
  }
  return 1.5 * static_cast<double>(sum) / (h * theta.sigma2) +
         static_cast<double>(n_used) * std::log(theta.sigma2);
}

ContrastFit fit_contrast(const ObservationSeries& obs, PotentialKind family) {
  check_family(family);
  if (obs.size() < 4)
    throw std::invalid_argument("contrast fit needs at least 4 observations");
  const std::vector<double> yhat = velocity_proxy(obs);
  const double h = obs.h;
  const std::size_t n_used = obs.size() - 3;

  // r_n = b_n + h*(gamma*u_n + k*w_n), linear in (gamma, k); k is alpha for
  // the quadratic family and beta^-2 for Kramers.
  long double suu = 0, sww = 0, suw = 0, sbu = 0, sbw = 0;
  for (std::size_t i = 0; i < n_used; ++i) {
    const double u = yhat[i];
    const double x = obs.values[i];
    const double w = family == PotentialKind::Quadratic ? x : x * x * x;
    const double b = yhat[i + 2] - yhat[i + 1];
    suu += static_cast<long double>(u) * u;
    sww += static_cast<long double>(w) * w;
    suw += static_cast<long double>(u) * w;
    sbu += static_cast<long double>(b) * u;
    sbw += static_cast<long double>(b) * w;
  }
  const long double det = suu * sww - suw * suw;
  if (!(std::abs(static_cast<double>(det)) > 0.0) ||
      std::abs(static_cast<double>(det)) < 1e-14 * static_cast<double>(suu * sww + 1e-300))
    throw std::runtime_error("fit_contrast: degenerate data (singular normal equations)");
  const double gamma = static_cast<double>((-sbu * sww + sbw * suw) / det) / h;
  const double k = static_cast<double>((-sbw * suu + sbu * suw) / det) / h;

  ContrastFit fit;
  fit.theta.gamma = gamma;
  if (family == PotentialKind::Quadratic) {
    fit.theta.drift2 = k;
  } else {
    if (!(k > 0.0))
      throw EstimateOutOfDomain(
          "fit_contrast: negative beta^-2 estimate " + std::to_string(k), k);
    fit.theta.drift2 = 1.0 / std::sqrt(k);
  }

  long double rss = 0.0L;
  for (std::size_t i = 0; i < n_used; ++i) {
    const double w = family == PotentialKind::Quadratic ? obs.values[i]
                                                        : std::pow(obs.values[i], 3);
    const double r = yhat[i + 2] - yhat[i + 1] + h * (gamma * yhat[i] + k * w);
    rss += static_cast<long double>(r) * r;
  }
  fit.residual_sum = static_cast<double>(rss);
  fit.n_used = static_cast<long>(n_used);
  fit.theta.sigma2 = 3.0 * fit.residual_sum / (2.0 * h * static_cast<double>(n_used));
  return fit;
}

}  // namespace langfit
