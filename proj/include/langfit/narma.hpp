#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "langfit/rng.hpp"
#include "langfit/sde.hpp"

namespace langfit {

// NARMA(2,q) structure registry. Nonlinear regressors Q_k(X_{n-2:n-1}, xi_{n-1}):
//   ARMA: none
//   M1:   X_{n-2}^3
//   M2:   X_{n-1}^3, X_{n-2}^2 (X_{n-1} - X_{n-2})
//   M3:   M2 plus X_{n-2}^3
//   M4:   X_{n-1}^3, X_{n-2}^2 X_{n-1}, X_{n-2}^3, X_{n-2}^5, X_{n-2}^2 xi_{n-1}
enum class NarmaStructure { ARMA, M1, M2, M3, M4 };

std::string to_string(NarmaStructure s);
NarmaStructure narma_structure_from_string(const std::string& s);

struct NarmaSpec {
  NarmaStructure structure = NarmaStructure::ARMA;
  int q = 0;  // MA order; AR order p is fixed at 2

  static constexpr int p = 2;
  int n_regressors() const;
  // true for the M4 regressor X_{n-2}^2 xi_{n-1}
  bool uses_shock_regressor() const { return structure == NarmaStructure::M4; }
  int m() const { return std::max(p, q); }
  void validate() const;  // M4 requires q >= 1
};

// X_n = Phi_n + xi_n with
// Phi_n = mu + a1 X_{n-1} + a2 X_{n-2} + sum_k b_k Q_k + sum_j c_j xi_{n-j},
// xi ~ N(0, c0^2).
struct NarmaModel {
  NarmaSpec spec;
  double a1 = 0.0, a2 = 0.0;
  std::vector<double> b;  // per-structure nonlinear coefficients
  std::vector<double> c;  // q MA coefficients
  double mu = 0.0;
  double c0 = 1.0;

  void validate() const;
  // Phi_n given (X_{n-1}, X_{n-2}) and the last max(q,1) shocks
  // (xi_prev[0] = xi_{n-1}, xi_prev[1] = xi_{n-2}, ...).
  double phi(double x1, double x2, const std::vector<double>& xi_prev) const;
};

struct ResidualTrace {
  std::vector<double> xi;  // xi_n for n = m+1..N
};

struct NumericOverflowError : std::runtime_error {
  NumericOverflowError(const std::string& msg, std::size_t index)
      : std::runtime_error(msg), first_bad_index(index) {}
  std::size_t first_bad_index;
};

// Recursive shock reconstruction with xi_1..xi_m = 0.
ResidualTrace compute_residuals(const NarmaModel& model, const ObservationSeries& obs);

// sum_{n=m+1}^N (X_n - Phi_n)^2/(2 c0^2) + ((N-q)/2) log c0^2.
double conditional_nll(const NarmaModel& model, const ObservationSeries& obs);

struct NarmaFitOptions {
  int restarts = 5;  // jittered simplex restarts for q >= 1
  std::uint64_t seed = 0;
  int max_iter = 4000;
  double jitter = 0.2;  // relative jitter on the restart starting points
};

struct NarmaFit {
  NarmaModel model;
  double nll = 0.0;
  bool converged = true;
  std::vector<double> restart_nlls;  // best-so-far after each restart (q >= 1)
  std::vector<double> se;            // q = 0 least-squares standard errors
};

// q = 0: exact linear least squares on (a, b, mu), c0^2 = RSS/(N-q) -- equal
// to the conditional MLE. q >= 1: simplex minimization of the conditional
// likelihood with c0^2 profiled out, initialized from the q = 0 fit with
// c = 0, plus jittered restarts. Requires N >= 50 * n_coefficients.
NarmaFit fit_narma(const NarmaSpec& spec, const ObservationSeries& obs,
                   const NarmaFitOptions& options = {});

struct InstabilityError : std::runtime_error {
  InstabilityError(const std::string& msg, std::size_t step) : std::runtime_error(msg), step_index(step) {}
  std::size_t step_index;
};

inline constexpr double kNarmaOverflowGuard = 1e10;

// Iterates the model forward with fresh shocks. init supplies the p most
// recent values (init.back() = X_0); past shocks start at zero. Throws
// InstabilityError if |X| exceeds the overflow guard.
std::vector<double> simulate_narma(const NarmaModel& model, std::size_t n_steps,
                                   const std::vector<double>& init, Rng& rng);

struct StabilityReport {
  bool stable = true;
  int diverged_count = 0;
};

// Runs n_realizations independent simulations of the given horizon from the
// init window; stable iff none diverge.
StabilityReport stability_probe(const NarmaModel& model, std::size_t horizon,
                                int n_realizations, const std::vector<double>& init,
                                std::uint64_t base_seed);

}  // namespace langfit
