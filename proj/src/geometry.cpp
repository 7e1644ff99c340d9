#include "hurlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "hurlab/hzeta.hpp"
#include "hurlab/parallel.hpp"
#include "hurlab/quadrature.hpp"

namespace hurlab {

namespace {

constexpr std::size_t kInnerBlock = 2048;

// Weighted vectors: sqrt(w) * f, so inner products are plain dot products.
std::vector<Complex> weighted(const GridFunction& f) {
  std::vector<Complex> out(f.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(f.grid->weights[i]) * f.values[i];
  return out;
}

// Serial dot for the fit inner loops (fits are single-threaded per instance).
Complex dot_serial(const Complex* a, const Complex* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
  }
  return {re, im};
}

void axpy(Complex s, const Complex* x, Complex* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

double norm_serial(const std::vector<Complex>& r) {
  double acc = 0.0;
  for (const Complex& z : r) acc += std::norm(z);
  return std::sqrt(acc);
}

// Weighted basis (n0 + k + a)^{-s} for k < count, row-major by k.
std::vector<Complex> weighted_basis(const QuadGrid& g, double a, long n0, long count) {
  const std::size_t P = g.nodes.size();
  std::vector<Complex> X(static_cast<std::size_t>(count) * P);
  par::parallel_for(count, [&](std::ptrdiff_t k) {
    const double lg = std::log(n0 + k + a);
    for (std::size_t i = 0; i < P; ++i)
      X[static_cast<std::size_t>(k) * P + i] = std::sqrt(g.weights[i]) * std::exp(-g.nodes[i] * lg);
  });
  return X;
}

Complex unit_phase(Complex z, Complex fallback) {
  double a = std::abs(z);
  return a > 0.0 ? z / a : fallback;
}

void check_grids(const GridFunction& f, const GridFunction& g) {
  if (!f.grid || !g.grid) throw GridMismatch("grid function without a grid");
  if (f.grid != g.grid && !(f.grid->U == g.grid->U)) throw GridMismatch("grid functions on different grids");
  if (f.values.size() != f.grid->nodes.size() || g.values.size() != g.grid->nodes.size())
    throw GridMismatch("grid function size does not match its grid");
}

}  // namespace

CompactBox CompactBox::exhaustion(int nu) {
  if (nu < 1) throw DomainError("K_nu needs nu >= 1");
  CompactBox b;
  b.nu = nu;
  b.sigma_lo = 0.5 + 1.0 / (5.0 * nu);
  b.sigma_hi = 1.0 - 1.0 / (5.0 * nu);
  b.t_lo = -nu;
  b.t_hi = nu;
  return b;
}

bool CompactBox::contains(Complex s) const {
  return s.real() >= sigma_lo && s.real() <= sigma_hi && s.imag() >= t_lo && s.imag() <= t_hi;
}

std::vector<Complex> CompactBox::boundary(int per_edge) const {
  if (per_edge < 2) throw DomainError("boundary: need at least 2 points per edge");
  const Complex c[4] = {{sigma_lo, t_lo}, {sigma_hi, t_lo}, {sigma_hi, t_hi}, {sigma_lo, t_hi}};
  std::vector<Complex> out;
  for (int e = 0; e < 4; ++e) {
    const Complex a = c[e], b = c[(e + 1) % 4];
    for (int k = 0; k < per_edge - 1; ++k) out.push_back(a + (b - a) * (double(k) / (per_edge - 1)));
  }
  return out;
}

std::vector<Complex> CompactBox::grid(int nx, int ny) const {
  if (nx < 2 || ny < 2) throw DomainError("grid: need at least 2 points per axis");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      out.emplace_back(sigma_lo + (sigma_hi - sigma_lo) * i / (nx - 1), t_lo + (t_hi - t_lo) * j / (ny - 1));
  return out;
}

DMetricValue d_metric(const HolFn& f, const HolFn& g, int M, const DMetricOptions& opt) {
  if (M < 1) throw DomainError("d_metric: need M >= 1");
  DMetricValue out;
  out.tail = std::ldexp(1.0, -M);
  auto sup_on = [&](const std::vector<Complex>& pts) {
    std::vector<double> v(pts.size());
    par::parallel_for(static_cast<std::ptrdiff_t>(pts.size()),
                      [&](std::ptrdiff_t i) { v[i] = std::abs(f(pts[i]) - g(pts[i])); });
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  for (int nu = 1; nu <= M; ++nu) {
    CompactBox K = CompactBox::exhaustion(nu);
    double coarse, fine;
    if (opt.boundary_only) {
      coarse = sup_on(K.boundary(opt.edge_points));
      fine = opt.refine ? std::max(coarse, sup_on(K.boundary(2 * opt.edge_points - 1))) : coarse;
    } else {
      coarse = sup_on(K.grid(opt.grid, opt.grid));
      fine = opt.refine ? std::max(coarse, sup_on(K.grid(2 * opt.grid - 1, 2 * opt.grid - 1))) : coarse;
    }
    out.sup_coarse.push_back(coarse);
    out.sup.push_back(fine);
    out.value += std::ldexp(fine / (1.0 + fine), -nu);
  }
  return out;
}

void RectDomainU::validate() const {
  if (!(sigma_a > 0.5 && sigma_a < sigma_b && sigma_b < 1.0))
    throw DomainError("RectDomainU: need 1/2 < sigma_a < sigma_b < 1");
  if (!(t_a < t_b)) throw DomainError("RectDomainU: need t_a < t_b");
  if (sigma_order < 1 || t_panels < 1 || t_order < 1) throw DomainError("RectDomainU: bad quadrature spec");
}

double RectDomainU::area() const { return (sigma_b - sigma_a) * (t_b - t_a); }

double RectDomainU::abs_s2_integral() const {
  const double ds = sigma_b - sigma_a, dt = t_b - t_a;
  return (std::pow(sigma_b, 3) - std::pow(sigma_a, 3)) / 3.0 * dt +
         ds * (std::pow(t_b, 3) - std::pow(t_a, 3)) / 3.0;
}

std::shared_ptr<const QuadGrid> make_grid(const RectDomainU& U) {
  U.validate();
  auto g = std::make_shared<QuadGrid>();
  g->U = U;
  Rule1D rs = composite_gauss(U.sigma_a, U.sigma_b, 1, U.sigma_order);
  Rule1D rt = composite_gauss(U.t_a, U.t_b, U.t_panels, U.t_order);
  g->nodes.reserve(rs.x.size() * rt.x.size());
  for (std::size_t i = 0; i < rs.x.size(); ++i)
    for (std::size_t j = 0; j < rt.x.size(); ++j) {
      g->nodes.emplace_back(rs.x[i], rt.x[j]);
      g->weights.push_back(rs.w[i] * rt.w[j]);
    }
  return g;
}

GridFunction GridFunction::sample(std::shared_ptr<const QuadGrid> grid, const HolFn& f) {
  GridFunction out{std::move(grid), {}};
  out.values.resize(out.grid->nodes.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = f(out.grid->nodes[i]);
  return out;
}

GridFunction GridFunction::dirichlet_term(std::shared_ptr<const QuadGrid> grid, double alpha, long n) {
  const double lg = std::log(n + alpha);
  GridFunction out{std::move(grid), {}};
  out.values.resize(out.grid->nodes.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::exp(-out.grid->nodes[i] * lg);
  return out;
}

Complex bergman_inner(const GridFunction& f, const GridFunction& g) {
  check_grids(f, g);
  const auto& w = f.grid->weights;
  return par::blocked_reduce(
      f.values.size(), kInnerBlock, Complex(0.0, 0.0),
      [&](std::size_t lo, std::size_t hi) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = lo; i < hi; ++i) acc += w[i] * f.values[i] * std::conj(g.values[i]);
        return acc;
      },
      [](Complex x, Complex y) { return x + y; });
}

Complex bergman_inner(const GridFunction& f, const GridFunction& g, const RectDomainU& U) {
  check_grids(f, g);
  if (!(f.grid->U == U)) throw GridMismatch("grid function is not sampled on the quadrature grid of U");
  return bergman_inner(f, g);
}

double bergman_norm(const GridFunction& f) { return std::sqrt(std::max(0.0, bergman_inner(f, f).real())); }

GammaFitResult gamma_fit(const GridFunction& f, double alpha, int N, const GammaFitOptions& opt) {
  if (N < 4) throw DomainError("gamma_fit: need N >= 4");
  if (!(alpha > 0.0)) throw DomainError("gamma_fit: alpha must be positive");
  if (!f.grid) throw GridMismatch("gamma_fit: target without grid");
  const std::size_t P = f.grid->nodes.size();
  const std::vector<Complex> X = weighted_basis(*f.grid, alpha, 0, N + 1);
  const std::vector<Complex> F = weighted(f);
  std::vector<double> xnorm2(N + 1);
  for (int n = 0; n <= N; ++n) {
    const Complex* xn = &X[static_cast<std::size_t>(n) * P];
    xnorm2[n] = dot_serial(xn, xn, P).real();
  }
  const double fnorm = norm_serial(F);

  GammaFitResult res;
  res.gamma.assign(N + 1, Complex(1.0, 0.0));
  std::vector<Complex> r = F;  // r = F - sum gamma_n X_n
  auto greedy_from = [&](int n0) {
    for (int n = n0; n <= N; ++n) {
      const Complex* xn = &X[static_cast<std::size_t>(n) * P];
      res.gamma[n] = unit_phase(dot_serial(r.data(), xn, P), Complex(1.0, 0.0));
      axpy(-res.gamma[n], xn, r.data(), P);
    }
  };
  switch (opt.init) {
    case PhaseInit::greedy:
      greedy_from(0);
      break;
    case PhaseInit::random: {
      std::mt19937_64 rng(opt.seed);
      std::uniform_real_distribution<double> U(0.0, kTwoPi);
      for (int n = 0; n <= N; ++n) {
        res.gamma[n] = std::polar(1.0, U(rng));
        axpy(-res.gamma[n], &X[static_cast<std::size_t>(n) * P], r.data(), P);
      }
      break;
    }
    case PhaseInit::warm: {
      const int k = std::min<int>(N + 1, static_cast<int>(opt.warm_start.size()));
      for (int n = 0; n < k; ++n) {
        res.gamma[n] = unit_phase(opt.warm_start[n], Complex(1.0, 0.0));
        axpy(-res.gamma[n], &X[static_cast<std::size_t>(n) * P], r.data(), P);
      }
      greedy_from(k);
      break;
    }
  }

  double cur = norm_serial(r);
  res.history.push_back(cur);
  std::vector<Complex> saved_r;
  std::vector<Complex> saved_gamma;
  res.budget_exhausted = true;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    saved_r = r;
    saved_gamma = res.gamma;
    for (int n = 0; n <= N; ++n) {
      const Complex* xn = &X[static_cast<std::size_t>(n) * P];
      // <r + gamma x, x> = <r, x> + gamma ||x||^2
      const Complex c = dot_serial(r.data(), xn, P) + res.gamma[n] * xnorm2[n];
      const Complex g = unit_phase(c, res.gamma[n]);
      axpy(res.gamma[n] - g, xn, r.data(), P);
      res.gamma[n] = g;
    }
    const double next = norm_serial(r);
    ++res.sweeps;
    if (!(next <= cur)) {
      // rounding floor reached: keep the previous iterate
      r = std::move(saved_r);
      res.gamma = std::move(saved_gamma);
      res.budget_exhausted = false;
      break;
    }
    res.history.push_back(next);
    const bool converged = cur - next <= opt.tol * std::max(fnorm, 1e-300);
    cur = next;
    if (converged) {
      res.budget_exhausted = false;
      break;
    }
  }
  res.residual = cur;
  return res;
}

BetaFitResult beta_fit(const GridFunction& f, double c, int M, int N, const BetaFitOptions& opt) {
  if (!(N > M) || M < 0) throw DomainError("beta_fit: need N > M >= 0");
  if (!(c > 0.0 && c < 1.0)) throw DomainError("beta_fit: need 0 < c < 1");
  if (!f.grid) throw GridMismatch("beta_fit: target without grid");
  const std::size_t P = f.grid->nodes.size();
  const int K = N - M;
  const std::vector<Complex> X = weighted_basis(*f.grid, c, M + 1, K);
  const std::vector<Complex> F = weighted(f);

  // Gram matrix G(m, n) = <x_n, x_m>, right side b(m) = <f, x_m>.
  Eigen::MatrixXcd G(K, K);
  Eigen::VectorXcd b(K);
  for (int m = 0; m < K; ++m) {
    const Complex* xm = &X[static_cast<std::size_t>(m) * P];
    b(m) = dot_serial(F.data(), xm, P);
    for (int n = m; n < K; ++n) {
      const Complex v = dot_serial(&X[static_cast<std::size_t>(n) * P], xm, P);
      G(m, n) = v;
      G(n, m) = std::conj(v);
    }
  }
  BetaFitResult res;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = std::max(eig.eigenvalues().minCoeff(), 0.0);
  res.condition = lmin > 0.0 ? lmax / lmin : INFINITY;
  Eigen::MatrixXcd A = G;
  if (!(res.condition <= opt.max_condition)) {
    res.regularized = true;
    A.diagonal().array() += lmax / opt.max_condition;
  }
  Eigen::VectorXcd sol = A.ldlt().solve(b);

  std::vector<Complex> beta(K);
  for (int n = 0; n < K; ++n) {
    Complex z = sol(n);
    beta[n] = std::abs(z) > 1.0 ? z / std::abs(z) : z;
  }
  auto residual_of = [&](const std::vector<Complex>& bt, std::vector<Complex>& r) {
    r = F;
    for (int n = 0; n < K; ++n) axpy(-bt[n], &X[static_cast<std::size_t>(n) * P], r.data(), P);
    return norm_serial(r);
  };
  std::vector<Complex> r;
  double cur = residual_of(beta, r);
  res.projected_residual = cur;
  if (!opt.warm_start.empty()) {
    std::vector<Complex> warm(K, Complex(0.0, 0.0));
    for (int n = 0; n < K && n < static_cast<int>(opt.warm_start.size()); ++n) {
      Complex z = opt.warm_start[n];
      warm[n] = std::abs(z) > 1.0 ? z / std::abs(z) : z;
    }
    std::vector<Complex> rw;
    double w = residual_of(warm, rw);
    if (w < cur) {
      beta = std::move(warm);
      r = std::move(rw);
      cur = w;
    }
  }
  std::vector<double> xnorm2(K);
  for (int n = 0; n < K; ++n) {
    const Complex* xn = &X[static_cast<std::size_t>(n) * P];
    xnorm2[n] = dot_serial(xn, xn, P).real();
  }
  const double fnorm = norm_serial(F);
  for (int sweep = 0; sweep < opt.polish_sweeps; ++sweep) {
    std::vector<Complex> saved_r = r, saved_beta = beta;
    for (int n = 0; n < K; ++n) {
      if (xnorm2[n] <= 0.0) continue;
      const Complex* xn = &X[static_cast<std::size_t>(n) * P];
      Complex z = (dot_serial(r.data(), xn, P) + beta[n] * xnorm2[n]) / xnorm2[n];
      if (std::abs(z) > 1.0) z /= std::abs(z);
      axpy(beta[n] - z, xn, r.data(), P);
      beta[n] = z;
    }
    const double next = norm_serial(r);
    if (!(next <= cur)) {
      r = std::move(saved_r);
      beta = std::move(saved_beta);
      break;
    }
    const bool converged = cur - next <= opt.polish_tol * std::max(fnorm, 1e-300);
    cur = next;
    if (converged) break;
  }
  res.beta = std::move(beta);
  res.residual = cur;
  return res;
}

double unconstrained_ls_residual(const GridFunction& f, double c, int M, int N) {
  if (!(N > M) || M < 0) throw DomainError("unconstrained_ls_residual: need N > M >= 0");
  const std::size_t P = f.grid->nodes.size();
  const int K = N - M;
  const std::vector<Complex> X = weighted_basis(*f.grid, c, M + 1, K);
  const std::vector<Complex> F = weighted(f);
  Eigen::MatrixXcd A(P, K);
  Eigen::VectorXcd y(P);
  for (std::size_t i = 0; i < P; ++i) y(i) = F[i];
  for (int n = 0; n < K; ++n)
    for (std::size_t i = 0; i < P; ++i) A(i, n) = X[static_cast<std::size_t>(n) * P + i];
  Eigen::VectorXcd beta = A.colPivHouseholderQr().solve(y);
  return (y - A * beta).norm();
}

PerturbationBound perturbation_bound(double c, double rho, std::shared_ptr<const QuadGrid> grid,
                                     const std::vector<Complex>& gamma) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("perturbation_bound: need 0 < c < 1");
  if (!(rho >= 0.0 && rho <= std::min(c, 1.0 - c) / 2.0))
    throw DomainError("perturbation_bound: need 0 <= rho <= min(c, 1 - c)/2");
  PerturbationBound out;
  out.K = grid->U.abs_s2_integral();
  out.rhs = rho * std::sqrt(out.K) * hurwitz(Complex(1.5, 0.0), c / 2.0).real();
  const std::size_t P = grid->nodes.size();
  std::vector<Complex> acc(P, Complex(0.0, 0.0));
  if (rho > 0.0) {
    for (std::size_t n = 0; n < gamma.size(); ++n) {
      const double la = std::log(n + c + rho), lc = std::log(n + c);
      for (std::size_t i = 0; i < P; ++i) {
        const Complex s = grid->nodes[i];
        acc[i] += gamma[n] * (std::exp(-s * la) - std::exp(-s * lc));
      }
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < P; ++i) sum += grid->weights[i] * std::norm(acc[i]);
  out.lhs = std::sqrt(sum);
  return out;
}

std::vector<Complex> align_phases(const std::vector<GridFunction>& x, const std::vector<Complex>& beta) {
  if (x.size() != beta.size()) throw std::invalid_argument("align_phases: size mismatch");
  std::vector<Complex> gamma(beta.size());
  if (x.empty()) return gamma;
  const std::size_t P = x.front().values.size();
  std::vector<Complex> e(P, Complex(0.0, 0.0));  // running sum (beta_i - gamma_i) x_i
  for (std::size_t j = 0; j < x.size(); ++j) {
    check_grids(x[j], x.front());
    const double r = std::abs(beta[j]);
    if (r > 1.0 + 1e-12) throw DomainError("align_phases: need |beta_j| <= 1");
    const Complex dir = r > 0.0 ? beta[j] / r : Complex(1.0, 0.0);
    const double h = std::sqrt(std::max(0.0, 1.0 - r * r));
    // gamma = dir (r +- i h), so beta - gamma = -+ i h dir
    const Complex diff = Complex(0.0, -h) * dir;
    Complex cross(0.0, 0.0);
    const auto& w = x[j].grid->weights;
    for (std::size_t i = 0; i < P; ++i) cross += w[i] * e[i] * std::conj(diff * x[j].values[i]);
    const double sgn = cross.real() <= 0.0 ? 1.0 : -1.0;
    gamma[j] = dir * Complex(r, sgn * h);
    const Complex d = beta[j] - gamma[j];
    for (std::size_t i = 0; i < P; ++i) e[i] += d * x[j].values[i];
  }
  return gamma;
}

}  // namespace hurlab
