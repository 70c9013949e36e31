#include "langfit/narma.hpp"

#include <cmath>
#include <limits>

#include "langfit/nelder_mead.hpp"

namespace langfit {

std::string to_string(NarmaStructure s) {
  switch (s) {
    case NarmaStructure::ARMA: return "ARMA";
    case NarmaStructure::M1: return "M1";
    case NarmaStructure::M2: return "M2";
    case NarmaStructure::M3: return "M3";
    case NarmaStructure::M4: return "M4";
  }
  return "?";
}

NarmaStructure narma_structure_from_string(const std::string& s) {
  if (s == "ARMA" || s == "arma") return NarmaStructure::ARMA;
  if (s == "M1" || s == "m1") return NarmaStructure::M1;
  if (s == "M2" || s == "m2") return NarmaStructure::M2;
  if (s == "M3" || s == "m3") return NarmaStructure::M3;
  if (s == "M4" || s == "m4") return NarmaStructure::M4;
  throw std::invalid_argument("unknown NARMA structure: " + s);
}

int NarmaSpec::n_regressors() const {
  switch (structure) {
    case NarmaStructure::ARMA: return 0;
    case NarmaStructure::M1: return 1;
    case NarmaStructure::M2: return 2;
    case NarmaStructure::M3: return 3;
    case NarmaStructure::M4: return 5;
  }
  return 0;
}

void NarmaSpec::validate() const {
  if (q < 0) throw std::invalid_argument("NARMA q must be >= 0");
  if (structure == NarmaStructure::M4 && q < 1)
    throw std::invalid_argument("M4 requires q >= 1 (its b5 term multiplies xi_{n-1})");
}

void NarmaModel::validate() const {
  spec.validate();
  if (static_cast<int>(b.size()) != spec.n_regressors())
    throw std::invalid_argument("NARMA b coefficient count does not match structure");
  if (static_cast<int>(c.size()) != spec.q)
    throw std::invalid_argument("NARMA c coefficient count does not match q");
  if (!(c0 >= 0.0)) throw std::invalid_argument("NARMA c0 must be >= 0");
}

namespace {

// nonlinear regressors Q_k(x1 = X_{n-1}, x2 = X_{n-2}, xi1 = xi_{n-1})
inline void eval_regressors(NarmaStructure s, double x1, double x2, double xi1, double* q) {
  switch (s) {
    case NarmaStructure::ARMA:
      break;
    case NarmaStructure::M1:
      q[0] = x2 * x2 * x2;
      break;
    case NarmaStructure::M2:
      q[0] = x1 * x1 * x1;
      q[1] = x2 * x2 * (x1 - x2);
      break;
    case NarmaStructure::M3:
      q[0] = x1 * x1 * x1;
      q[1] = x2 * x2 * (x1 - x2);
      q[2] = x2 * x2 * x2;
      break;
    case NarmaStructure::M4: {
      const double x2sq = x2 * x2;
      q[0] = x1 * x1 * x1;
      q[1] = x2sq * x1;
      q[2] = x2sq * x2;
      q[3] = x2sq * x2sq * x2;
      q[4] = x2sq * xi1;
      break;
    }
  }
}

// Shock recursion shared by the public ops and the fit objective. Returns
// false (with *bad_index set) instead of throwing when a non-finite or
// over-guard Phi appears.
bool run_residuals(const NarmaModel& model, const std::vector<double>& x, std::vector<double>& xi,
                   long double* rss, std::size_t* bad_index) {
  const int m = model.spec.m();
  const int q = model.spec.q;
  const std::size_t n = x.size();
  xi.assign(n, 0.0);
  long double acc = 0.0L;
  double qbuf[5] = {0, 0, 0, 0, 0};
  for (std::size_t i = static_cast<std::size_t>(m); i < n; ++i) {
    const double x1 = x[i - 1];
    const double x2 = x[i - 2];
    const double xi1 = xi[i - 1];
    eval_regressors(model.spec.structure, x1, x2, xi1, qbuf);
    double phi = model.mu + model.a1 * x1 + model.a2 * x2;
    for (int k = 0; k < model.spec.n_regressors(); ++k) phi += model.b[k] * qbuf[k];
    for (int j = 1; j <= q; ++j) phi += model.c[j - 1] * xi[i - static_cast<std::size_t>(j)];
    if (!std::isfinite(phi) || std::abs(phi) > kNarmaOverflowGuard) {
      if (bad_index) *bad_index = i;
      return false;
    }
    xi[i] = x[i] - phi;
    acc += static_cast<long double>(xi[i]) * xi[i];
  }
  if (rss) *rss = acc;
  return true;
}

// dense symmetric solve with partial pivoting; optionally accumulates the
// inverse for standard errors
void solve_dense(std::vector<std::vector<long double>>& A, std::vector<long double>& rhs,
                 std::vector<std::vector<long double>>* inverse) {
  const std::size_t n = A.size();
  std::vector<std::vector<long double>> inv;
  if (inverse) {
    inv.assign(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(static_cast<double>(A[r][col])) > std::abs(static_cast<double>(A[piv][col]))) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(rhs[col], rhs[piv]);
    if (inverse) std::swap(inv[col], inv[piv]);
    const long double d = A[col][col];
    if (d == 0.0L) throw std::runtime_error("fit_narma: degenerate data (singular design)");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const long double f = A[r][col] / d;
      if (f == 0.0L) continue;
      for (std::size_t c = 0; c < n; ++c) {
        A[r][c] -= f * A[col][c];
        if (inverse) inv[r][c] -= f * inv[col][c];
      }
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = A[i][i];
    rhs[i] /= d;
    if (inverse)
      for (std::size_t c = 0; c < n; ++c) inv[i][c] /= d;
  }
  if (inverse) *inverse = std::move(inv);
}

// least squares on (a1, a2, b_k, mu) with the shock regressor (M4) excluded;
// returns coefficients in model order and the residual sum of squares
struct LsResult {
  NarmaModel model;
  long double rss = 0.0L;
  std::vector<double> se;
};

LsResult least_squares_fit(const NarmaSpec& spec, const ObservationSeries& obs, bool want_se) {
  const std::vector<double>& x = obs.values;
  const int m = spec.m();
  const int r_all = spec.n_regressors();
  const int r_ls = spec.uses_shock_regressor() ? r_all - 1 : r_all;
  const std::size_t dim = 2 + static_cast<std::size_t>(r_ls) + 1;
  const std::size_t n = x.size();

  std::vector<std::vector<long double>> gram(dim, std::vector<long double>(dim, 0.0L));
  std::vector<long double> rhs(dim, 0.0L);
  std::vector<double> row(dim);
  double qbuf[5] = {0, 0, 0, 0, 0};
  for (std::size_t i = static_cast<std::size_t>(m); i < n; ++i) {
    const double x1 = x[i - 1], x2 = x[i - 2];
    eval_regressors(spec.structure, x1, x2, 0.0, qbuf);
    row[0] = x1;
    row[1] = x2;
    for (int k = 0; k < r_ls; ++k) row[2 + static_cast<std::size_t>(k)] = qbuf[k];
    row[dim - 1] = 1.0;
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a; b < dim; ++b) gram[a][b] += static_cast<long double>(row[a]) * row[b];
      rhs[a] += static_cast<long double>(row[a]) * x[i];
    }
  }
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = 0; b < a; ++b) gram[a][b] = gram[b][a];

  std::vector<std::vector<long double>> inv;
  solve_dense(gram, rhs, want_se ? &inv : nullptr);

  LsResult out;
  out.model.spec = spec;
  out.model.a1 = static_cast<double>(rhs[0]);
  out.model.a2 = static_cast<double>(rhs[1]);
  out.model.b.assign(static_cast<std::size_t>(r_all), 0.0);
  for (int k = 0; k < r_ls; ++k) out.model.b[k] = static_cast<double>(rhs[2 + static_cast<std::size_t>(k)]);
  if (spec.uses_shock_regressor()) out.model.b[r_all - 1] = 0.0;
  out.model.c.assign(static_cast<std::size_t>(spec.q), 0.0);
  out.model.mu = static_cast<double>(rhs[dim - 1]);

  long double rss = 0.0L;
  for (std::size_t i = static_cast<std::size_t>(m); i < n; ++i) {
    const double x1 = x[i - 1], x2 = x[i - 2];
    eval_regressors(spec.structure, x1, x2, 0.0, qbuf);
    double pred = out.model.mu + out.model.a1 * x1 + out.model.a2 * x2;
    for (int k = 0; k < r_ls; ++k) pred += out.model.b[k] * qbuf[k];
    const double e = x[i] - pred;
    rss += static_cast<long double>(e) * e;
  }
  out.rss = rss;

  if (want_se) {
    const double c02 = static_cast<double>(rss) / static_cast<double>(n - static_cast<std::size_t>(spec.q));
    out.se.resize(dim);
    for (std::size_t a = 0; a < dim; ++a)
      out.se[a] = std::sqrt(std::max(0.0, static_cast<double>(inv[a][a]) * c02));
  }
  return out;
}

std::vector<double> pack(const NarmaModel& model) {
  std::vector<double> v;
  v.push_back(model.a1);
  v.push_back(model.a2);
  v.insert(v.end(), model.b.begin(), model.b.end());
  v.insert(v.end(), model.c.begin(), model.c.end());
  v.push_back(model.mu);
  return v;
}

void unpack(const std::vector<double>& v, NarmaModel& model) {
  std::size_t i = 0;
  model.a1 = v[i++];
  model.a2 = v[i++];
  for (auto& bk : model.b) bk = v[i++];
  for (auto& cj : model.c) cj = v[i++];
  model.mu = v[i++];
}

}  // namespace

double NarmaModel::phi(double x1, double x2, const std::vector<double>& xi_prev) const {
  double qbuf[5] = {0, 0, 0, 0, 0};
  const double xi1 = xi_prev.empty() ? 0.0 : xi_prev[0];
  eval_regressors(spec.structure, x1, x2, xi1, qbuf);
  double out = mu + a1 * x1 + a2 * x2;
  for (int k = 0; k < spec.n_regressors(); ++k) out += b[k] * qbuf[k];
  for (int j = 1; j <= spec.q; ++j)
    out += c[j - 1] * (static_cast<std::size_t>(j - 1) < xi_prev.size() ? xi_prev[j - 1] : 0.0);
  return out;
}

ResidualTrace compute_residuals(const NarmaModel& model, const ObservationSeries& obs) {
  model.validate();
  const int m = model.spec.m();
  if (obs.size() <= static_cast<std::size_t>(m))
    throw std::invalid_argument("compute_residuals needs more than m observations");
  std::vector<double> xi;
  std::size_t bad = 0;
  if (!run_residuals(model, obs.values, xi, nullptr, &bad))
    throw NumericOverflowError("compute_residuals: non-finite Phi at observation index " +
                                   std::to_string(bad + 1),
                               bad + 1);
  ResidualTrace trace;
  trace.xi.assign(xi.begin() + m, xi.end());
  return trace;
}

double conditional_nll(const NarmaModel& model, const ObservationSeries& obs) {
  model.validate();
  if (!(model.c0 > 0.0)) throw std::invalid_argument("conditional_nll needs c0 > 0");
  const int m = model.spec.m();
  if (obs.size() <= static_cast<std::size_t>(m))
    throw std::invalid_argument("conditional_nll needs more than m observations");
  std::vector<double> xi;
  long double rss = 0.0L;
  std::size_t bad = 0;
  if (!run_residuals(model, obs.values, xi, &rss, &bad))
    throw NumericOverflowError("conditional_nll: non-finite Phi at observation index " +
                                   std::to_string(bad + 1),
                               bad + 1);
  const double c02 = model.c0 * model.c0;
  const double n_eff = static_cast<double>(obs.size()) - static_cast<double>(model.spec.q);
  return static_cast<double>(rss) / (2.0 * c02) + 0.5 * n_eff * std::log(c02);
}

NarmaFit fit_narma(const NarmaSpec& spec, const ObservationSeries& obs,
                   const NarmaFitOptions& options) {
  spec.validate();
  const std::size_t dim = 2 + static_cast<std::size_t>(spec.n_regressors()) +
                          static_cast<std::size_t>(spec.q) + 1;
  if (obs.size() < 50 * dim)
    throw std::invalid_argument("fit_narma needs at least 50 observations per coefficient");

  const double n_eff = static_cast<double>(obs.size()) - static_cast<double>(spec.q);
  NarmaFit fit;

  if (spec.q == 0) {
    LsResult ls = least_squares_fit(spec, obs, true);
    fit.model = ls.model;
    fit.model.c0 = std::sqrt(static_cast<double>(ls.rss) / n_eff);
    fit.se = ls.se;
    fit.converged = true;
    fit.nll = conditional_nll(fit.model, obs);
    return fit;
  }

  // q >= 1: profile out c0^2; minimizing the conditional likelihood is then
  // minimizing 0.5*(N-q)*(1 + log(RSS/(N-q))).
  LsResult init_ls = least_squares_fit(spec, obs, false);
  NarmaModel work = init_ls.model;
  auto objective = [&](const std::vector<double>& v) {
    unpack(v, work);
    std::vector<double> xi;
    long double rss = 0.0L;
    if (!run_residuals(work, obs.values, xi, &rss, nullptr))
      return std::numeric_limits<double>::max();
    const double mean_sq = static_cast<double>(rss) / n_eff;
    if (!(mean_sq > 0.0)) return std::numeric_limits<double>::max();
    return 0.5 * n_eff * (1.0 + std::log(mean_sq));
  };

  const std::vector<double> x0 = pack(init_ls.model);
  const double coef_scale = std::max({std::abs(init_ls.model.a1), std::abs(init_ls.model.a2), 0.01});
  std::vector<double> steps(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i)
    steps[i] = 0.05 * (std::abs(x0[i]) > 1e-8 ? std::abs(x0[i]) : coef_scale);

  Rng jitter_rng(derive_seed(options.seed, 0x4e4d'5253ULL));
  NelderMeadOptions nm;
  nm.max_iter = options.max_iter;
  nm.ftol_rel = 1e-12;

  double best = std::numeric_limits<double>::max();
  std::vector<double> best_x = x0;
  bool best_converged = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    std::vector<double> start = x0;
    if (r > 0)
      for (std::size_t i = 0; i < start.size(); ++i)
        start[i] += options.jitter * steps[i] / 0.05 * jitter_rng.normal();
    NelderMeadResult res = nelder_mead(objective, start, steps, nm);
    if (res.fval < best) {
      best = res.fval;
      best_x = res.x;
      best_converged = res.converged;
    }
    fit.restart_nlls.push_back(best);
  }

  unpack(best_x, fit.model = init_ls.model);
  std::vector<double> xi;
  long double rss = 0.0L;
  if (!run_residuals(fit.model, obs.values, xi, &rss, nullptr))
    throw std::runtime_error("fit_narma: optimizer returned a diverging model");
  fit.model.c0 = std::sqrt(static_cast<double>(rss) / n_eff);
  fit.converged = best_converged;
  fit.nll = conditional_nll(fit.model, obs);
  return fit;
}

std::vector<double> simulate_narma(const NarmaModel& model, std::size_t n_steps,
                                   const std::vector<double>& init, Rng& rng) {
  model.validate();
  if (init.size() < static_cast<std::size_t>(NarmaSpec::p))
    throw std::invalid_argument("simulate_narma needs p past values in the init window");
  double x1 = init[init.size() - 1];
  double x2 = init[init.size() - 2];
  const int q_hist = std::max(model.spec.q, model.spec.uses_shock_regressor() ? 1 : 0);
  std::vector<double> xi_prev(static_cast<std::size_t>(std::max(q_hist, 1)), 0.0);

  std::vector<double> out;
  out.reserve(n_steps);
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double shock = model.c0 > 0.0 ? model.c0 * rng.normal() : 0.0;
    const double value = model.phi(x1, x2, xi_prev) + shock;
    if (!std::isfinite(value) || std::abs(value) > kNarmaOverflowGuard)
      throw InstabilityError("simulate_narma: divergence at step " + std::to_string(n + 1), n + 1);
    out.push_back(value);
    x2 = x1;
    x1 = value;
    for (std::size_t j = xi_prev.size(); j-- > 1;) xi_prev[j] = xi_prev[j - 1];
    xi_prev[0] = shock;
  }
  return out;
}

StabilityReport stability_probe(const NarmaModel& model, std::size_t horizon, int n_realizations,
                                const std::vector<double>& init, std::uint64_t base_seed) {
  StabilityReport report;
  for (int i = 0; i < n_realizations; ++i) {
    Rng rng(derive_seed(base_seed, static_cast<std::uint64_t>(i)));
    try {
      simulate_narma(model, horizon, init, rng);
    } catch (const InstabilityError&) {
      ++report.diverged_count;
    }
  }
  report.stable = report.diverged_count == 0;
  return report;
}

}  // namespace langfit
