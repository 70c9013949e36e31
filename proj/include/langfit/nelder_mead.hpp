#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace langfit {

struct NelderMeadOptions {
  int max_iter = 2000;
  double ftol_rel = 1e-12;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fval = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Standard downhill simplex (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5). steps[i] sets the i-th initial simplex offset; pass empty to
// use options.initial_step for every coordinate.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const std::vector<double>& steps = {},
                                    const NelderMeadOptions& options = {}) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> x(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = steps.empty() ? options.initial_step : steps[i];
    x[i + 1][i] += (s != 0.0 ? s : options.initial_step);
  }
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<std::size_t> idx(n + 1);
  std::iota(idx.begin(), idx.end(), 0u);
  std::vector<double> xc(n), xr(n), xe(n), xk(n);

  NelderMeadResult result;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const double fbest = fx[idx[0]], fworst = fx[idx[n]];
    if (std::abs(fworst - fbest) <= options.ftol_rel * (std::abs(fbest) + 1e-300)) {
      result.converged = true;
      break;
    }

    std::fill(xc.begin(), xc.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) xc[j] += x[idx[i]][j];
    for (std::size_t j = 0; j < n; ++j) xc[j] /= static_cast<double>(n);

    const std::vector<double>& xw = x[idx[n]];
    for (std::size_t j = 0; j < n; ++j) xr[j] = xc[j] + (xc[j] - xw[j]);
    const double fr = f(xr);

    if (fr < fbest) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = xc[j] + 2.0 * (xr[j] - xc[j]);
      const double fe = f(xe);
      if (fe < fr) {
        x[idx[n]] = xe;
        fx[idx[n]] = fe;
      } else {
        x[idx[n]] = xr;
        fx[idx[n]] = fr;
      }
      continue;
    }
    if (fr < fx[idx[n - 1]]) {
      x[idx[n]] = xr;
      fx[idx[n]] = fr;
      continue;
    }
    if (fr < fworst) {
      for (std::size_t j = 0; j < n; ++j) xk[j] = xc[j] + 0.5 * (xr[j] - xc[j]);
    } else {
      for (std::size_t j = 0; j < n; ++j) xk[j] = xc[j] + 0.5 * (xw[j] - xc[j]);
    }
    const double fk = f(xk);
    if (fk < fworst) {
      x[idx[n]] = xk;
      fx[idx[n]] = fk;
      continue;
    }
    const std::vector<double>& xb = x[idx[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) x[idx[i]][j] = xb[j] + 0.5 * (x[idx[i]][j] - xb[j]);
      fx[idx[i]] = f(x[idx[i]]);
    }
  }

  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
  result.x = x[idx[0]];
  result.fval = fx[idx[0]];
  result.iterations = it;
  return result;
}

}  // namespace langfit
