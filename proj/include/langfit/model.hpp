#pragma once

#include <cmath>
#include <string>

namespace langfit {

// Potential families for the Langevin system
//   dx = y dt,  dy = (-gamma*y - V'(x)) dt + sigma dB.
//
// Quadratic:   V'(x) = alpha*x                     (linear Langevin)
// DoubleWell:  V'(x) = beta*x^3 - alpha*x
// KramersForm: V'(x) = x^3/beta^2 - x, wells at x = +-beta
enum class PotentialKind { Quadratic, DoubleWell, KramersForm };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Quadratic;
  double alpha = 1.0;  // Quadratic/DoubleWell linear coefficient
  double beta = 0.0;   // DoubleWell cubic coefficient, or Kramers well position

  static PotentialSpec quadratic(double alpha);
  static PotentialSpec double_well(double alpha, double beta);
  static PotentialSpec kramers(double beta);

  double vprime(double x) const {
    switch (kind) {
      case PotentialKind::Quadratic:
        return alpha * x;
      case PotentialKind::DoubleWell:
        return beta * x * x * x - alpha * x;
      case PotentialKind::KramersForm:
        return x * x * x / (beta * beta) - x;
    }
    return 0.0;
  }

  double vsecond(double x) const {
    switch (kind) {
      case PotentialKind::Quadratic:
        return alpha;
      case PotentialKind::DoubleWell:
        return 3.0 * beta * x * x - alpha;
      case PotentialKind::KramersForm:
        return 3.0 * x * x / (beta * beta) - 1.0;
    }
    return 0.0;
  }

  double value(double x) const {
    const double x2 = x * x;
    switch (kind) {
      case PotentialKind::Quadratic:
        return 0.5 * alpha * x2;
      case PotentialKind::DoubleWell:
        return 0.25 * beta * x2 * x2 - 0.5 * alpha * x2;
      case PotentialKind::KramersForm:
        return 0.25 * x2 * x2 / (beta * beta) - 0.5 * x2;
    }
    return 0.0;
  }

  // KramersForm{beta} <-> DoubleWell{alpha=1, beta^-2}, lossless both ways.
  PotentialSpec to_double_well() const;
  PotentialSpec to_kramers() const;

  void validate() const;  // throws std::invalid_argument
};

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& s);

struct LangevinParams {
  double gamma = 1.0;  // damping, 1/time
  PotentialSpec potential;
  double sigma = 1.0;  // noise amplitude

  // Einstein relation
  double temperature() const { return sigma * sigma / (2.0 * gamma); }

  void validate() const;
};

struct PhaseState {
  double x = 0.0;
  double y = 0.0;
};

}  // namespace langfit
