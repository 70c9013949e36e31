#include "langfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace langfit {

Histogram empirical_pdf(const std::vector<double>& series, int n_bins) {
  if (n_bins < 1) throw std::invalid_argument("empirical_pdf needs n_bins >= 1");
  if (series.size() < 10 * static_cast<std::size_t>(n_bins))
    throw std::invalid_argument("empirical_pdf needs at least 10 samples per bin");
  const auto [mn_it, mx_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *mn_it, hi = *mx_it;
  if (!(hi > lo)) throw std::runtime_error("empirical_pdf: degenerate range (constant series)");

  Histogram h;
  h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  const double width = (hi - lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.bin_edges[i] = lo + width * i;
  h.bin_edges.back() = hi;

  std::vector<std::size_t> counts(static_cast<std::size_t>(n_bins), 0);
  for (double v : series) {
    auto idx = static_cast<long>((v - lo) / width);
    idx = std::clamp<long>(idx, 0, n_bins - 1);
    ++counts[idx];
  }
  h.densities.resize(static_cast<std::size_t>(n_bins));
  const double norm = 1.0 / (static_cast<double>(series.size()) * width);
  for (int i = 0; i < n_bins; ++i)
    h.densities[i] = static_cast<double>(counts[i]) * norm;
  return h;
}

AcfCurve empirical_acf(const std::vector<double>& series, int max_lag) {
  if (max_lag < 0) throw std::invalid_argument("empirical_acf needs max_lag >= 0");
  if (series.size() <= 10 * static_cast<std::size_t>(max_lag) || series.size() < 2)
    throw std::invalid_argument("empirical_acf needs more than 10*max_lag samples");
  const std::size_t n = series.size();
  long double mean = 0.0L;
  for (double v : series) mean += v;
  mean /= static_cast<long double>(n);

  long double denom = 0.0L;
  for (double v : series) {
    const long double d = v - mean;
    denom += d * d;
  }
  if (!(denom > 0.0L)) throw std::runtime_error("empirical_acf: degenerate (constant series)");

  AcfCurve acf;
  acf.values.resize(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    long double num = 0.0L;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i)
      num += (series[i] - mean) * (series[i + static_cast<std::size_t>(k)] - mean);
    acf.values[k] = static_cast<double>(num / denom);
  }
  return acf;
}

DensityCurve kramers_stationary_pdf_x(const LangevinParams& params,
                                      const std::vector<double>& grid) {
  params.validate();
  if (params.potential.kind == PotentialKind::Quadratic)
    throw std::invalid_argument("kramers_stationary_pdf_x needs the Kramers/double-well family");
  if (grid.size() < 3) throw std::invalid_argument("grid too short");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");

  const double scale = 2.0 * params.gamma / (params.sigma * params.sigma);
  DensityCurve out;
  out.grid = grid;
  out.density.resize(grid.size());
  // subtract the potential minimum before exponentiating
  double vmin = params.potential.value(grid[0]);
  for (double x : grid) vmin = std::min(vmin, params.potential.value(x));
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.density[i] = std::exp(-scale * (params.potential.value(grid[i]) - vmin));

  long double integral = 0.0L;
  for (std::size_t i = 1; i < grid.size(); ++i)
    integral += 0.5L * (out.density[i] + out.density[i - 1]) * (grid[i] - grid[i - 1]);
  if (!(integral > 0.0L)) throw std::runtime_error("kramers_stationary_pdf_x: zero mass on grid");
  for (auto& d : out.density) d = static_cast<double>(d / integral);

  const double peak = *std::max_element(out.density.begin(), out.density.end());
  out.narrow_grid = out.density.front() > 1e-6 * peak || out.density.back() > 1e-6 * peak;
  return out;
}

}  // namespace langfit
