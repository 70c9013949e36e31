#pragma once

#include <vector>

#include "langfit/model.hpp"

namespace langfit {

// Density-normalized equal-width histogram: sum(density_i * width_i) = 1.
struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1, sorted
  std::vector<double> densities;  // n_bins, nonnegative
};

Histogram empirical_pdf(const std::vector<double>& series, int n_bins);

// value(0) = 1; value(k) = sum (x_n - xbar)(x_{n+k} - xbar) / sum (x_n - xbar)^2.
struct AcfCurve {
  std::vector<double> values;  // lags 0..L
};

AcfCurve empirical_acf(const std::vector<double>& series, int max_lag);

// Analytic stationary x-marginal of the Kramers family:
// density(x) proportional to exp(-(2 gamma/sigma^2) V(x)), trapezoid-normalized
// on the grid. narrow_grid is set when the boundary density exceeds 1e-6 of
// the peak.
struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  bool narrow_grid = false;
};

DensityCurve kramers_stationary_pdf_x(const LangevinParams& params,
                                      const std::vector<double>& grid);

}  // namespace langfit
