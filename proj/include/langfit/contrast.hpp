#pragma once

#include <stdexcept>
#include <vector>

#include "langfit/model.hpp"
#include "langfit/sde.hpp"

namespace langfit {

// Drift/diffusion parameters of the shifted-drift contrast. drift2 is the
// second drift parameter: alpha for the quadratic family, beta for Kramers.
struct ContrastTheta {
  double gamma = 0.0;
  double drift2 = 0.0;
  double sigma2 = 1.0;
};

struct ContrastFit {
  ContrastTheta theta;
  double residual_sum = 0.0;  // sum over n of r_n^2 at the minimizer
  long n_used = 0;            // N - 3
};

// Thrown when the cubic-coefficient estimate is negative and no Kramers
// beta exists; carries the raw beta^-2 estimate.
struct EstimateOutOfDomain : std::runtime_error {
  EstimateOutOfDomain(const std::string& msg, double raw) : std::runtime_error(msg), raw_value(raw) {}
  double raw_value;
};

// Finite-difference velocity proxy: yhat_n = (x_{(n+1)h} - x_{nh})/h,
// n = 1..N-1.
std::vector<double> velocity_proxy(const ObservationSeries& obs);

// L_N(theta) = sum_{n=1}^{N-3} (3/2) r_n^2/(h sigma^2) + (N-3) log sigma^2
// with r_n = yhat_{n+2} - yhat_{n+1} + h*(gamma*yhat_n + V'_theta(x_{nh})).
// Estimation-model drift derivative: alpha*x for Quadratic, beta^-2 x^3 for
// KramersForm (the linear term is not part of the fitted model; the fitted
// beta parameterizes the full Kramers system when simulated).
double contrast_value(const ContrastTheta& theta, PotentialKind family,
                      const ObservationSeries& obs);

// Exact global minimizer of L_N: the residual is affine in the drift
// parameters, so a 2-parameter linear least-squares solve plus the profile
// formula sigma^2 = 3*residual_sum/(2h(N-3)).
ContrastFit fit_contrast(const ObservationSeries& obs, PotentialKind family);

}  // namespace langfit
