#pragma once

#include <complex>
#include <vector>

#include "langfit/model.hpp"
#include "langfit/rng.hpp"

namespace langfit {

// Closed-form machinery for the linear Langevin equation
//   dx = y dt, dy = (-gamma*y - alpha*x) dt + sigma dB
// with drift matrix A = [[0, 1], [-alpha, -gamma]].

enum class EigenKind { DistinctReal, ComplexPair, Repeated };

// e^{Ah} with the eigenstructure it was built from. Invariants:
// a11 + a22 = trace(e^{Ah}), det = e^{-gamma h}; lambda1/2 are the roots
// of lambda^2 + gamma*lambda + alpha = 0 (lambda0 duplicated when Repeated).
struct Propagator2 {
  double a11 = 1, a12 = 0, a21 = 0, a22 = 1;
  EigenKind eigen_kind = EigenKind::DistinctReal;
  std::complex<double> lambda1, lambda2;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
};

Propagator2 propagator(double gamma, double alpha, double h);

// Covariance of the exact discrete-time noise vector
//   W_{n+1,i} = sigma * Int_0^h (e^{A(h-u)})_{i2} dB(nh+u).
struct DiscreteNoiseCov {
  double c11 = 0, c12 = 0, c22 = 0;
};

DiscreteNoiseCov discrete_noise_cov(double gamma, double alpha, double sigma, double h);

// Exact-in-distribution one-step sampler; the oracle for integrator tests.
class ExactLinearSampler {
 public:
  ExactLinearSampler(double gamma, double alpha, double sigma, double h);

  PhaseState step(const PhaseState& state, Rng& rng) const;
  const Propagator2& propagator() const { return prop_; }
  const DiscreteNoiseCov& noise_cov() const { return cov_; }

 private:
  Propagator2 prop_;
  DiscreteNoiseCov cov_;
  double l11_ = 0, l21_ = 0, l22_ = 0;  // Cholesky factor of cov
};

PhaseState exact_linear_step(double gamma, double alpha, double sigma, double h,
                             const PhaseState& state, Rng& rng);

// Draw from the stationary law N(0, diag(sigma^2/(2 gamma alpha), sigma^2/(2 gamma))).
PhaseState stationary_draw(double gamma, double alpha, double sigma, Rng& rng);

// Autocovariance gamma_j of the stationary observed process {x_{nh}},
// j = 0..max_lag; gamma_0 = sigma^2/(2 alpha gamma). Real-valued in all
// three eigenvalue regimes.
std::vector<double> stationary_autocov(double gamma, double alpha, double sigma, double h,
                                       int max_lag);

// ARMA(2,1) equal in distribution to {x_{nh}}:
//   X_n = a1 X_{n-1} + a2 X_{n-2} + W_n + theta1 W_{n-1}, W ~ N(0, sigma_w^2).
struct ArmaEquiv {
  double a1 = 0, a2 = 0, theta1 = 0, sigma_w = 0;
};

ArmaEquiv arma21_equiv(double gamma, double alpha, double sigma, double h);

// General ARMA(p,q): X_n - phi_1 X_{n-1} - ... = W_n + theta_1 W_{n-1} + ...
struct ArmaSpec {
  std::vector<double> phi;
  std::vector<double> theta;
  double sigma_w2 = 1.0;
};

// Autocovariance gamma(k), k = 0..max_lag, from the psi-weight equations for
// k < max{p, q+1} and the homogeneous AR recursion beyond. Throws if the
// AR polynomial has a root on or inside the unit circle.
std::vector<double> arma_autocov(const ArmaSpec& spec, int max_lag);

// Inverts the ARMA(2,1) equivalence back to (gamma, alpha, sigma) of the
// quadratic family: gamma = -ln(-a2)/h, alpha = lambda1*lambda2 from the AR
// roots, sigma^2 = 2 gamma alpha gamma(0).
LangevinParams sde_from_arma(const ArmaEquiv& equiv, double h);

// Roots of c[0] + c[1] z + ... + c[n] z^n (Durand-Kerner).
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

}  // namespace langfit
