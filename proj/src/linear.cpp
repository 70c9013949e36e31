#include "langfit/linear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace langfit {

namespace {

constexpr double kRepeatedTol = 1e-12;

struct Mat2 {
  double a11, a12, a21, a22;
};

// e^{Au} for the drift matrix A = [[0,1],[-alpha,-gamma]], all eigen regimes.
Mat2 expm(double gamma, double alpha, double u, EigenKind kind) {
  const double disc = gamma * gamma - 4.0 * alpha;
  Mat2 m{};
  switch (kind) {
    case EigenKind::ComplexPair: {
      const double mu = -0.5 * gamma;
      const double om = 0.5 * std::sqrt(-disc);
      const double e = std::exp(mu * u), c = std::cos(om * u), s = std::sin(om * u) / om;
      // e^{Au} = e^{mu u} [cos I + sin/om (A - mu I)]
      m.a11 = e * (c - mu * s);
      m.a12 = e * s;
      m.a21 = e * (-alpha * s);
      m.a22 = e * (c + (-gamma - mu) * s);
      break;
    }
    case EigenKind::DistinctReal: {
      const double sq = std::sqrt(disc);
      const double l1 = 0.5 * (-gamma + sq), l2 = 0.5 * (-gamma - sq);
      const double e1 = std::exp(l1 * u), e2 = std::exp(l2 * u);
      // e^{Au} = (e1 (A - l2 I) - e2 (A - l1 I)) / (l1 - l2)
      const double d = l1 - l2;
      m.a11 = (e1 * (-l2) - e2 * (-l1)) / d;
      m.a12 = (e1 - e2) / d;
      m.a21 = (e1 * (-alpha) - e2 * (-alpha)) / d;
      m.a22 = (e1 * (-gamma - l2) - e2 * (-gamma - l1)) / d;
      break;
    }
    case EigenKind::Repeated: {
      const double l0 = -0.5 * gamma;
      const double e = std::exp(l0 * u);
      // e^{Au} = e^{l0 u} [I + u (A - l0 I)]
      m.a11 = e * (1.0 - l0 * u);
      m.a12 = e * u;
      m.a21 = e * (-alpha * u);
      m.a22 = e * (1.0 + (-gamma - l0) * u);
      break;
    }
  }
  return m;
}

EigenKind classify(double gamma, double alpha) {
  const double disc = gamma * gamma - 4.0 * alpha;
  const double scale = std::max(gamma * gamma, 4.0 * alpha);
  if (std::abs(disc) <= kRepeatedTol * scale) return EigenKind::Repeated;
  return disc > 0.0 ? EigenKind::DistinctReal : EigenKind::ComplexPair;
}

// Adaptive Simpson to relative tolerance; integrands here are smooth.
template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

Propagator2 propagator(double gamma, double alpha, double h) {
  if (!(gamma > 0.0) || !(alpha > 0.0) || !(h > 0.0))
    throw std::invalid_argument("propagator needs gamma, alpha, h > 0");
  const EigenKind kind = classify(gamma, alpha);
  const Mat2 m = expm(gamma, alpha, h, kind);
  Propagator2 p;
  p.a11 = m.a11;
  p.a12 = m.a12;
  p.a21 = m.a21;
  p.a22 = m.a22;
  p.eigen_kind = kind;
  const double disc = gamma * gamma - 4.0 * alpha;
  switch (kind) {
    case EigenKind::ComplexPair: {
      const double om = 0.5 * std::sqrt(-disc);
      p.lambda1 = {-0.5 * gamma, om};
      p.lambda2 = {-0.5 * gamma, -om};
      break;
    }
    case EigenKind::DistinctReal: {
      const double sq = std::sqrt(disc);
      p.lambda1 = {0.5 * (-gamma + sq), 0.0};
      p.lambda2 = {0.5 * (-gamma - sq), 0.0};
      break;
    }
    case EigenKind::Repeated:
      p.lambda1 = p.lambda2 = {-0.5 * gamma, 0.0};
      break;
  }
  return p;
}

DiscreteNoiseCov discrete_noise_cov(double gamma, double alpha, double sigma, double h) {
  if (!(gamma > 0.0) || !(alpha > 0.0) || !(sigma >= 0.0) || !(h > 0.0))
    throw std::invalid_argument("discrete_noise_cov: invalid parameters");
  DiscreteNoiseCov cov;
  if (sigma == 0.0) return cov;
  const EigenKind kind = classify(gamma, alpha);
  // Cov_ij = sigma^2 Int_0^h (e^{Av})_{i2} (e^{Av})_{j2} dv
  auto col = [&](double v) {
    const Mat2 m = expm(gamma, alpha, v, kind);
    return std::pair<double, double>{m.a12, m.a22};
  };
  const double tol = 1e-10;
  const double s2 = sigma * sigma;
  cov.c11 = s2 * adaptive_simpson([&](double v) { auto c = col(v); return c.first * c.first; },
                                  0.0, h, tol * h);
  cov.c12 = s2 * adaptive_simpson([&](double v) { auto c = col(v); return c.first * c.second; },
                                  0.0, h, tol * h);
  cov.c22 = s2 * adaptive_simpson([&](double v) { auto c = col(v); return c.second * c.second; },
                                  0.0, h, tol * h);
  return cov;
}

ExactLinearSampler::ExactLinearSampler(double gamma, double alpha, double sigma, double h)
    : prop_(langfit::propagator(gamma, alpha, h)),
      cov_(discrete_noise_cov(gamma, alpha, sigma, h)) {
  if (cov_.c11 > 0.0) {
    l11_ = std::sqrt(cov_.c11);
    l21_ = cov_.c12 / l11_;
    const double r = cov_.c22 - l21_ * l21_;
    l22_ = r > 0.0 ? std::sqrt(r) : 0.0;
  }
}

PhaseState ExactLinearSampler::step(const PhaseState& state, Rng& rng) const {
  PhaseState next;
  next.x = prop_.a11 * state.x + prop_.a12 * state.y;
  next.y = prop_.a21 * state.x + prop_.a22 * state.y;
  if (l11_ > 0.0) {
    const double z1 = rng.normal(), z2 = rng.normal();
    next.x += l11_ * z1;
    next.y += l21_ * z1 + l22_ * z2;
  }
  return next;
}

PhaseState exact_linear_step(double gamma, double alpha, double sigma, double h,
                             const PhaseState& state, Rng& rng) {
  return ExactLinearSampler(gamma, alpha, sigma, h).step(state, rng);
}

PhaseState stationary_draw(double gamma, double alpha, double sigma, Rng& rng) {
  PhaseState s;
  s.x = std::sqrt(sigma * sigma / (2.0 * gamma * alpha)) * rng.normal();
  s.y = std::sqrt(sigma * sigma / (2.0 * gamma)) * rng.normal();
  return s;
}

std::vector<double> stationary_autocov(double gamma, double alpha, double sigma, double h,
                                       int max_lag) {
  if (!(gamma > 0.0) || !(alpha > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("stationary_autocov: invalid parameters");
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  const double g0 = sigma * sigma / (2.0 * alpha * gamma);
  const EigenKind kind = classify(gamma, alpha);
  const double disc = gamma * gamma - 4.0 * alpha;
  std::vector<double> out(static_cast<std::size_t>(max_lag) + 1);
  for (int j = 0; j <= max_lag; ++j) {
    const double t = j * h;
    double r;
    switch (kind) {
      case EigenKind::ComplexPair: {
        // trig form: e^{-gamma t/2} (cos(om t) + gamma/(2 om) sin(om t))
        const double om = 0.5 * std::sqrt(-disc);
        r = std::exp(-0.5 * gamma * t) *
            (std::cos(om * t) + 0.5 * gamma / om * std::sin(om * t));
        break;
      }
      case EigenKind::DistinctReal: {
        const double sq = std::sqrt(disc);
        const double l1 = 0.5 * (-gamma + sq), l2 = 0.5 * (-gamma - sq);
        r = (l1 * std::exp(l2 * t) - l2 * std::exp(l1 * t)) / (l1 - l2);
        break;
      }
      case EigenKind::Repeated: {
        const double l0 = -0.5 * gamma;
        r = std::exp(l0 * t) * (1.0 - l0 * t);
        break;
      }
      default:
        r = 0.0;
    }
    out[static_cast<std::size_t>(j)] = g0 * r;
  }
  return out;
}

ArmaEquiv arma21_equiv(double gamma, double alpha, double sigma, double h) {
  const Propagator2 p = propagator(gamma, alpha, h);
  const std::vector<double> g = stationary_autocov(gamma, alpha, sigma, h, 2);
  ArmaEquiv eq;
  eq.a1 = p.trace();
  eq.a2 = -std::exp(-gamma * h);
  const double denom = g[1] * (1.0 - eq.a2) - g[0] * eq.a1;
  const double c = (g[0] - g[1] * eq.a1 - g[2] * eq.a2) / denom;
  const double disc = (c - eq.a1) * (c - eq.a1) - 4.0;
  if (disc < 0.0)
    throw std::runtime_error("arma21_equiv: no real invertible MA root ((c-a1)^2 < 4)");
  const double sq = std::sqrt(disc);
  const double r1 = 0.5 * (c - eq.a1 - sq);
  const double r2 = 0.5 * (c - eq.a1 + sq);
  // roots multiply to 1; take the one inside the unit disk
  eq.theta1 = std::abs(r1) < 1.0 ? r1 : r2;
  if (std::abs(eq.theta1) >= 1.0)
    throw std::runtime_error("arma21_equiv: no invertible MA root");
  const double sw2 = denom / eq.theta1;
  if (!(sw2 > 0.0)) throw std::runtime_error("arma21_equiv: nonpositive innovation variance");
  eq.sigma_w = std::sqrt(sw2);
  return eq;
}

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
  std::size_t deg = coeffs.size();
  while (deg > 1 && coeffs[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  const std::size_t n = deg - 1;
  std::vector<std::complex<double>> c(coeffs.begin(), coeffs.begin() + static_cast<long>(deg));
  std::vector<std::complex<double>> r(n);
  // Durand-Kerner from staggered starting points
  for (std::size_t i = 0; i < n; ++i)
    r[i] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(i + 1));
  for (int iter = 0; iter < 500; ++iter) {
    double move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> num = c[n];
      for (std::size_t k = n; k-- > 0;) num = num * r[i] + c[k];
      std::complex<double> den = c[n];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= (r[i] - r[j]);
      const std::complex<double> delta = num / den;
      r[i] -= delta;
      move = std::max(move, std::abs(delta));
    }
    if (move < 1e-14) break;
  }
  return r;
}

std::vector<double> arma_autocov(const ArmaSpec& spec, int max_lag) {
  const int p = static_cast<int>(spec.phi.size());
  const int q = static_cast<int>(spec.theta.size());
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  if (!(spec.sigma_w2 > 0.0)) throw std::invalid_argument("sigma_w2 must be > 0");
  if (p > 0) {
    // causal iff phi(z) != 0 for |z| <= 1
    std::vector<double> phi_poly{1.0};
    for (double c : spec.phi) phi_poly.push_back(-c);
    for (const auto& z : poly_roots(phi_poly))
      if (std::abs(z) <= 1.0 + 1e-12)
        throw std::runtime_error("arma_autocov: non-causal AR polynomial (root inside unit disk)");
  }

  const int m0 = std::max(p, q + 1);
  auto phi = [&](int j) { return j >= 1 && j <= p ? spec.phi[j - 1] : 0.0; };
  auto theta = [&](int j) {
    if (j == 0) return 1.0;
    return j >= 1 && j <= q ? spec.theta[j - 1] : 0.0;
  };

  // psi-weights up to q
  std::vector<double> psi(q + 1, 0.0);
  psi[0] = 1.0;
  for (int j = 1; j <= q; ++j) {
    double s = j < m0 ? theta(j) : 0.0;
    for (int k = 1; k <= std::min(j, p); ++k) s += phi(k) * psi[j - k];
    psi[j] = s;
  }

  // linear system for gamma(0..U-1): equations k < m0 carry the theta*psi
  // right side, equations k >= m0 are homogeneous
  const int U = std::max(m0, p + 1);
  std::vector<std::vector<double>> A(U, std::vector<double>(U, 0.0));
  std::vector<double> b(U, 0.0);
  for (int k = 0; k < U; ++k) {
    A[k][k] += 1.0;
    for (int i = 1; i <= p; ++i) A[k][std::abs(k - i)] -= phi(i);
    if (k < m0) {
      double s = 0.0;
      for (int j = k; j <= q; ++j) s += theta(j) * psi[j - k];
      b[k] = spec.sigma_w2 * s;
    }
  }
  // Gaussian elimination with partial pivoting (U is tiny)
  for (int col = 0; col < U; ++col) {
    int piv = col;
    for (int r = col + 1; r < U; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    if (A[col][col] == 0.0)
      throw std::runtime_error("arma_autocov: singular autocovariance system");
    for (int r = col + 1; r < U; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < U; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> gamma_head(U);
  for (int r = U; r-- > 0;) {
    double s = b[r];
    for (int c = r + 1; c < U; ++c) s -= A[r][c] * gamma_head[c];
    gamma_head[r] = s / A[r][r];
  }

  std::vector<double> out(max_lag + 1, 0.0);
  for (int k = 0; k <= max_lag && k < U; ++k) out[k] = gamma_head[k];
  // iterate the homogeneous difference equation for larger lags
  for (int k = U; k <= max_lag; ++k) {
    double s = 0.0;
    for (int i = 1; i <= p; ++i) s += phi(i) * out[k - i];
    out[k] = s;
  }
  return out;
}

LangevinParams sde_from_arma(const ArmaEquiv& equiv, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("sde_from_arma: h must be > 0");
  if (!(equiv.a2 > -1.0 && equiv.a2 < 0.0))
    throw std::runtime_error("sde_from_arma: a2 = " + std::to_string(equiv.a2) +
                             " outside (-1, 0)");
  const double gamma = -std::log(-equiv.a2) / h;

  // roots of phi(z) = 1 - a1 z - a2 z^2 give e^{-lambda_i h}
  const std::complex<double> a1c(equiv.a1, 0.0);
  const std::complex<double> disc = a1c * a1c + 4.0 * equiv.a2;
  const std::complex<double> sq = std::sqrt(disc);
  const std::complex<double> z1 = (a1c + sq) / (-2.0 * equiv.a2);
  const std::complex<double> z2 = (a1c - sq) / (-2.0 * equiv.a2);
  for (const auto& z : {z1, z2}) {
    if (std::abs(z) <= 1.0)
      throw std::runtime_error("sde_from_arma: AR root inside unit disk, no stable SDE");
    if (std::abs(z.imag()) < 1e-14 && z.real() <= 0.0)
      throw std::runtime_error("sde_from_arma: negative real AR root, no real eigenvalues");
  }
  const std::complex<double> lam1 = -std::log(z1) / h;
  const std::complex<double> lam2 = -std::log(z2) / h;
  const std::complex<double> prod = lam1 * lam2;
  if (std::abs(prod.imag()) > 1e-8 * std::abs(prod))
    throw std::runtime_error("sde_from_arma: inconsistent AR roots");
  const double alpha = prod.real();
  if (!(alpha > 0.0)) throw std::runtime_error("sde_from_arma: nonpositive alpha");

  ArmaSpec spec;
  spec.phi = {equiv.a1, equiv.a2};
  spec.theta = {equiv.theta1};
  spec.sigma_w2 = equiv.sigma_w * equiv.sigma_w;
  const double g0 = arma_autocov(spec, 0)[0];
  const double sigma2 = 2.0 * gamma * alpha * g0;
  if (!(sigma2 > 0.0)) throw std::runtime_error("sde_from_arma: nonpositive sigma^2");

  LangevinParams params;
  params.gamma = gamma;
  params.potential = PotentialSpec::quadratic(alpha);
  params.sigma = std::sqrt(sigma2);
  params.validate();
  return params;
}

}  // namespace langfit
