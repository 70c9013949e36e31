#include "langfit/model.hpp"

#include <cmath>
#include <stdexcept>

namespace langfit {

PotentialSpec PotentialSpec::quadratic(double alpha) {
  PotentialSpec p;
  p.kind = PotentialKind::Quadratic;
  p.alpha = alpha;
  p.beta = 0.0;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::double_well(double alpha, double beta) {
  PotentialSpec p;
  p.kind = PotentialKind::DoubleWell;
  p.alpha = alpha;
  p.beta = beta;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::kramers(double beta) {
  PotentialSpec p;
  p.kind = PotentialKind::KramersForm;
  p.alpha = 1.0;
  p.beta = beta;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::to_double_well() const {
  switch (kind) {
    case PotentialKind::DoubleWell:
      return *this;
    case PotentialKind::KramersForm:
      return double_well(1.0, 1.0 / (beta * beta));
    case PotentialKind::Quadratic:
      throw std::invalid_argument("quadratic potential has no double-well form");
  }
  throw std::logic_error("unreachable");
}

PotentialSpec PotentialSpec::to_kramers() const {
  switch (kind) {
    case PotentialKind::KramersForm:
      return *this;
    case PotentialKind::DoubleWell:
      if (alpha != 1.0)
        throw std::invalid_argument("double well with alpha != 1 has no Kramers form");
      return kramers(1.0 / std::sqrt(beta));
    case PotentialKind::Quadratic:
      throw std::invalid_argument("quadratic potential has no Kramers form");
  }
  throw std::logic_error("unreachable");
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::Quadratic:
      if (!(alpha > 0.0)) throw std::invalid_argument("quadratic potential needs alpha > 0");
      break;
    case PotentialKind::DoubleWell:
      if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("double-well potential needs alpha, beta > 0");
      break;
    case PotentialKind::KramersForm:
      if (!(beta > 0.0)) throw std::invalid_argument("Kramers potential needs beta > 0");
      break;
  }
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Quadratic:
      return "quadratic";
    case PotentialKind::DoubleWell:
      return "double_well";
    case PotentialKind::KramersForm:
      return "kramers";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "quadratic" || s == "linear") return PotentialKind::Quadratic;
  if (s == "double_well") return PotentialKind::DoubleWell;
  if (s == "kramers") return PotentialKind::KramersForm;
  throw std::invalid_argument("unknown potential family: " + s);
}

void LangevinParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  potential.validate();
}

}  // namespace langfit
