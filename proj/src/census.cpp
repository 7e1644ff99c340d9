#include "hurlab/census.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "hurlab/hzeta.hpp"
#include "hurlab/kernels.hpp"
#include "hurlab/parallel.hpp"

namespace hurlab {

namespace {

constexpr double kNudge = 1e-4;
constexpr int kMaxNudges = 10;
// Bisection below this length means a zero sits closer than about 1e-6.
constexpr double kMinSegment = 1e-6;

enum Edge { bottom = 0, right = 1, top = 2, left = 3 };

struct SegResult {
  double darg = 0.0;
  long evals = 0;
  bool near_zero = false;
  double min_abs = std::numeric_limits<double>::infinity();
};

double arg_ratio(Complex num, Complex den) { return std::arg(num / den); }

void track(double alpha, Complex a, Complex b, Complex fa, Complex fb, int depth, int max_depth, SegResult& out) {
  const Complex m = 0.5 * (a + b);
  const Complex fm = hurwitz(m, alpha);
  ++out.evals;
  out.min_abs = std::min(out.min_abs, std::abs(fm));
  if (fm == Complex(0.0, 0.0)) {
    out.near_zero = true;
    return;
  }
  const double d1 = arg_ratio(fm, fa), d2 = arg_ratio(fb, fm), d = arg_ratio(fb, fa);
  if (std::abs(d1) < kPi / 2 && std::abs(d2) < kPi / 2 && std::abs(d1 + d2 - d) < 1e-6) {
    out.darg += d1 + d2;
    return;
  }
  if (depth >= max_depth || std::abs(b - a) < kMinSegment) {
    out.near_zero = true;
    return;
  }
  track(alpha, a, m, fa, fm, depth + 1, max_depth, out);
  if (!out.near_zero) track(alpha, m, b, fm, fb, depth + 1, max_depth, out);
}

struct Trace {
  std::array<double, 4> darg{};
  std::array<bool, 4> near_zero{};
  long evals = 0;
  double min_abs = std::numeric_limits<double>::infinity();
};

Trace trace_contour(double alpha, const RectContour& c) {
  const std::array<Complex, 5> corner{Complex(c.sigma1, c.t_lo), Complex(c.sigma2, c.t_lo),
                                      Complex(c.sigma2, c.t_hi), Complex(c.sigma1, c.t_hi),
                                      Complex(c.sigma1, c.t_lo)};
  struct Seg {
    int edge;
    Complex a, b;
  };
  std::vector<Seg> segs;
  const double step = std::ldexp(c.base_step, -c.refine);
  for (int e = 0; e < 4; ++e) {
    const Complex a = corner[e], b = corner[e + 1];
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(b - a) / step)));
    for (long k = 0; k < n; ++k)
      segs.push_back({e, a + (b - a) * (double(k) / n), k + 1 == n ? b : a + (b - a) * (double(k + 1) / n)});
  }
  // endpoint values; segment k ends where segment k+1 starts
  const std::size_t S = segs.size();
  std::vector<Complex> fv(S);
  par::parallel_for(static_cast<std::ptrdiff_t>(S), [&](std::ptrdiff_t k) { fv[k] = hurwitz(segs[k].a, alpha); });
  std::vector<SegResult> res(S);
  par::parallel_for(static_cast<std::ptrdiff_t>(S), [&](std::ptrdiff_t k) {
    const Complex fa = fv[k], fb = fv[(k + 1) % S];
    res[k].min_abs = std::min(std::abs(fa), std::abs(fb));
    if (fa == Complex(0.0, 0.0) || fb == Complex(0.0, 0.0)) {
      res[k].near_zero = true;
      return;
    }
    track(alpha, segs[k].a, segs[k].b, fa, fb, 0, c.max_depth, res[k]);
  });
  Trace tr;
  tr.evals = static_cast<long>(S);
  for (std::size_t k = 0; k < S; ++k) {
    const int e = segs[k].edge;
    tr.darg[e] += res[k].darg;
    tr.near_zero[e] = tr.near_zero[e] || res[k].near_zero;
    tr.evals += res[k].evals;
    tr.min_abs = std::min(tr.min_abs, res[k].min_abs);
  }
  return tr;
}

}  // namespace

void RectContour::validate() const {
  if (!(sigma1 > 0.5 && sigma1 < sigma2 && sigma2 < 1.0))
    throw DomainError("RectContour: need 1/2 < sigma1 < sigma2 < 1");
  if (!(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo <= t_hi))
    throw DomainError("RectContour: need finite t_lo <= t_hi");
  if (!(base_step > 0.0) || refine < 0 || max_depth < 1) throw DomainError("RectContour: bad subdivision");
}

nlohmann::json CensusReport::to_json() const {
  nlohmann::json zs = nlohmann::json::array();
  for (const auto& z : zeros)
    zs.push_back({{"re", z.center.real()},
                  {"im", z.center.imag()},
                  {"radius", z.radius},
                  {"abs_value", z.abs_value},
                  {"newton_iterations", z.newton_iterations},
                  {"converged", z.converged}});
  return {{"alpha", alpha},
          {"rect", {rect.sigma1, rect.sigma2, rect.t_lo, rect.t_hi}},
          {"count", count},
          {"winding", winding},
          {"integrality_error", integrality_error},
          {"edge_winding", edge_winding},
          {"refinement", refinement},
          {"nudges", nudges},
          {"evaluations", evaluations},
          {"min_abs", min_abs},
          {"zeros", zs}};
}

CensusReport count_zeros(double alpha, const RectContour& c) {
  c.validate();
  if (!(alpha > 0.0)) throw DomainError("count_zeros: alpha must be positive");
  CensusReport rep;
  rep.alpha = alpha;
  rep.rect = c;
  rep.refinement = c.refine;
  if (c.t_hi == c.t_lo) return rep;

  RectContour cur = c;
  int nudges = 0;
  for (;;) {
    Trace tr = trace_contour(alpha, cur);
    rep.evaluations += tr.evals;
    const bool hit = tr.near_zero[0] || tr.near_zero[1] || tr.near_zero[2] || tr.near_zero[3];
    if (hit) {
      if (nudges == kMaxNudges)
        throw ContourError("count_zeros: zero within ~1e-6 of the contour after " + std::to_string(kMaxNudges) +
                           " nudges");
      ++nudges;
      // Only the horizontal edges can move; a vertical-edge hit moves both.
      const bool side = tr.near_zero[right] || tr.near_zero[left];
      if (tr.near_zero[bottom] || side) cur.t_lo = c.t_lo + kNudge * nudges;
      if (tr.near_zero[top] || side) cur.t_hi = c.t_hi + kNudge * nudges;
      if (cur.t_lo >= cur.t_hi) throw ContourError("count_zeros: rectangle collapsed while nudging");
      continue;
    }
    const double total = tr.darg[0] + tr.darg[1] + tr.darg[2] + tr.darg[3];
    const double w = total / kTwoPi;
    const double err = std::abs(w - std::nearbyint(w));
    if (err >= 1e-3) {
      if (cur.refine >= c.refine + 3) throw ContourError("count_zeros: winding number not integral");
      ++cur.refine;
      continue;
    }
    rep.rect = cur;
    rep.refinement = cur.refine;
    rep.nudges = nudges;
    rep.winding = w;
    rep.integrality_error = err;
    rep.count = std::lround(w);
    for (int e = 0; e < 4; ++e) rep.edge_winding[e] = tr.darg[e] / kTwoPi;
    rep.min_abs = tr.min_abs;
    if (rep.count < 0) throw ContourError("count_zeros: negative winding");
    return rep;
  }
}

LocalizedZero newton_polish(double alpha, Complex s0, int max_iter) {
  LocalizedZero z;
  Complex s = s0;
  Complex f = hurwitz(s, alpha);
  Complex d = 1.0;
  try {
    for (int it = 0; it < max_iter; ++it) {
      z.newton_iterations = it;
      if (std::abs(f) < 1e-15) break;
      d = derivative(1, s, alpha);
      const Complex step = f / d;
      double lambda = 1.0;
      Complex sn = s - step, fn = hurwitz(sn, alpha);
      while (std::abs(fn) >= std::abs(f) && lambda > 1e-4) {
        lambda *= 0.5;
        sn = s - lambda * step;
        fn = hurwitz(sn, alpha);
      }
      if (std::abs(fn) >= std::abs(f)) break;
      s = sn;
      f = fn;
      if (std::abs(lambda * step) < 1e-15 * std::max(1.0, std::abs(s))) break;
    }
    d = derivative(1, s, alpha);
  } catch (const std::exception&) {
    // the iterate wandered near the pole; report what we have
  }
  z.center = s;
  z.abs_value = std::abs(f);
  z.radius = std::max(1e-14, 2.0 * std::abs(f) / std::abs(d));
  z.converged = z.abs_value < 1e-10;
  return z;
}

namespace {

void locate_rec(double alpha, const RectContour& c, long count, std::vector<LocalizedZero>& out, int depth) {
  if (count == 0) return;
  const double h = c.t_hi - c.t_lo;
  if (count == 1 && h <= 2.0) {
    LocalizedZero z = newton_polish(alpha, Complex(0.5 * (c.sigma1 + c.sigma2), 0.5 * (c.t_lo + c.t_hi)));
    const bool inside = z.center.real() > c.sigma1 && z.center.real() < c.sigma2 && z.center.imag() > c.t_lo &&
                        z.center.imag() < c.t_hi;
    if (z.converged && inside) {
      out.push_back(z);
      return;
    }
  }
  if (h < 1e-3 || depth > 60) {
    // unresolved cluster: report the box
    LocalizedZero z;
    z.center = Complex(0.5 * (c.sigma1 + c.sigma2), 0.5 * (c.t_lo + c.t_hi));
    z.radius = 0.5 * std::hypot(c.sigma2 - c.sigma1, h);
    z.abs_value = std::abs(hurwitz(z.center, alpha));
    for (long k = 0; k < count; ++k) out.push_back(z);
    return;
  }
  RectContour lo = c, hi = c;
  lo.t_hi = hi.t_lo = c.t_lo + 0.5 * h;
  CensusReport a = count_zeros(alpha, lo);
  hi.t_lo = a.rect.t_hi;
  CensusReport b = count_zeros(alpha, hi);
  locate_rec(alpha, a.rect, a.count, out, depth + 1);
  locate_rec(alpha, b.rect, b.count, out, depth + 1);
}

}  // namespace

CensusReport locate_zeros(double alpha, const RectContour& c) {
  CensusReport rep = count_zeros(alpha, c);
  locate_rec(alpha, rep.rect, rep.count, rep.zeros, 0);
  return rep;
}

ShiftDomain ShiftDomain::disc(Complex center, double radius) {
  ShiftDomain d;
  d.kind = Kind::disc;
  d.center = center;
  d.radius = radius;
  d.validate();
  return d;
}

ShiftDomain ShiftDomain::rect(double sigma_lo, double sigma_hi, double t_lo, double t_hi) {
  ShiftDomain d;
  d.kind = Kind::rect;
  d.sigma_lo = sigma_lo;
  d.sigma_hi = sigma_hi;
  d.t_lo = t_lo;
  d.t_hi = t_hi;
  d.validate();
  return d;
}

void ShiftDomain::validate() const {
  if (kind == Kind::disc) {
    if (!(radius > 0.0 && center.real() - radius > 0.5 && center.real() + radius < 1.0))
      throw DomainError("ShiftDomain: disc must lie inside 1/2 < Re s < 1");
  } else if (!(sigma_lo > 0.5 && sigma_lo < sigma_hi && sigma_hi < 1.0 && t_lo < t_hi)) {
    throw DomainError("ShiftDomain: rectangle must lie inside 1/2 < Re s < 1");
  }
}

std::vector<Complex> ShiftDomain::nodes(int grid, bool boundary_only) const {
  if (grid < 2) throw DomainError("ShiftDomain: need grid >= 2");
  std::vector<Complex> out;
  if (kind == Kind::disc) {
    if (boundary_only) {
      const int P = 4 * grid;
      for (int j = 0; j < P; ++j) out.push_back(center + std::polar(radius, kTwoPi * j / P));
    } else {
      out.push_back(center);
      for (int i = 1; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
          out.push_back(center + std::polar(radius * i / (grid - 1), kTwoPi * j / grid));
    }
    return out;
  }
  CompactBox box;
  box.sigma_lo = sigma_lo;
  box.sigma_hi = sigma_hi;
  box.t_lo = t_lo;
  box.t_hi = t_hi;
  return boundary_only ? box.boundary(grid) : box.grid(grid, grid);
}

namespace {

std::vector<double> tau_grid(double lo, double T, double step) {
  if (!(T >= lo && step > 0.0)) throw DomainError("tau grid: need T >= tau_lo and step > 0");
  const long n = static_cast<long>(std::floor((T - lo) / step + 1e-9)) + 1;
  std::vector<double> taus(n);
  for (long k = 0; k < n; ++k) taus[k] = lo + k * step;
  return taus;
}

}  // namespace

ShiftSearchResult shift_search(double alpha, const ShiftDomain& K, const HolFn& f, const std::string& target,
                               double eps, double T, const ShiftOptions& opt) {
  K.validate();
  if (!(eps > 0.0)) throw DomainError("shift_search: need eps > 0");
  ShiftSearchResult res;
  const std::vector<Complex> nodes = K.nodes(opt.grid, opt.boundary_only);
  std::vector<Complex> targets(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) targets[j] = f(nodes[j]);
  res.grid_points = static_cast<long>(nodes.size());
  res.taus = tau_grid(opt.tau_lo, T, opt.tau_step);
  res.sup_dist = shift_sup(alpha, nodes, targets, res.taus);
  std::size_t best = 0;
  for (std::size_t k = 0; k < res.taus.size(); ++k) {
    if (res.sup_dist[k] < res.sup_dist[best]) best = k;
    if (res.sup_dist[k] < eps) res.passing.push_back({res.taus[k], res.sup_dist[k], eps, target});
  }
  res.best = {res.taus[best], res.sup_dist[best], eps, target};
  res.measure = (T - opt.tau_lo) * double(res.passing.size()) / double(res.taus.size());
  return res;
}

DerivSearchResult derivative_target_search(double alpha, double sigma0, const std::vector<Complex>& z, double eps,
                                           double T, double tau_step, double r, int circle_points) {
  if (!(sigma0 > 0.5 && sigma0 < 1.0)) throw DomainError("derivative_target_search: need 1/2 < sigma0 < 1");
  if (z.empty()) throw DomainError("derivative_target_search: need at least one target");
  if (!(eps > 0.0)) throw DomainError("derivative_target_search: need eps > 0");
  const double rmax = std::min(sigma0 - 0.5, 1.0 - sigma0);
  if (r <= 0.0) r = 0.5 * rmax;
  if (!(r < rmax)) throw DomainError("derivative_target_search: need r < min(sigma0 - 1/2, 1 - sigma0)");
  const int N = static_cast<int>(z.size()) - 1;

  DerivSearchResult res;
  res.eps = eps;
  res.r = r;
  double s = 0.0, fact = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) fact *= n;
    s += fact / std::pow(r, n);
  }
  res.eps_prime = eps / s;

  const std::vector<double> taus = tau_grid(0.0, T, tau_step);
  // target polynomial on the circle
  std::vector<Complex> nodes(circle_points), targets(circle_points);
  for (int j = 0; j < circle_points; ++j) {
    const Complex u = std::polar(r, kTwoPi * j / circle_points);
    nodes[j] = sigma0 + u;
    Complex p(0.0, 0.0), pw(1.0, 0.0);
    double f = 1.0;
    for (int n = 0; n <= N; ++n) {
      if (n > 0) f *= n;
      p += z[n] * pw / f;
      pw *= u;
    }
    targets[j] = p;
  }
  const std::vector<double> disc_sup = shift_sup(alpha, nodes, targets, taus);

  res.records.resize(taus.size());
  std::exception_ptr failure;
  par::parallel_for(static_cast<std::ptrdiff_t>(taus.size()), [&](std::ptrdiff_t k) {
    DerivRecord rec;
    rec.tau = taus[k];
    rec.disc_sup = disc_sup[k];
    try {
      const std::vector<Complex> d = derivatives(N, Complex(sigma0, taus[k]), alpha);
      for (int n = 0; n <= N; ++n) rec.deriv_dist = std::max(rec.deriv_dist, std::abs(d[n] - z[n]));
    } catch (...) {
      HURLAB_OMP(critical)
      if (!failure) failure = std::current_exception();
    }
    res.records[k] = rec;
  });
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t k = 0; k < res.records.size(); ++k) {
    const DerivRecord& rec = res.records[k];
    if (rec.deriv_dist < res.records[best].deriv_dist) best = k;
    if (rec.deriv_dist < eps) res.passing_taus.push_back(rec.tau);
    if (rec.disc_sup < res.eps_prime && !(rec.deriv_dist < eps)) ++res.cauchy_violations;
  }
  res.best = res.records[best];
  res.measure = T * double(res.passing_taus.size()) / double(taus.size());
  return res;
}

nlohmann::json RoucheCertificate::to_json() const {
  return {{"issued", issued},       {"alpha", alpha},      {"tau", tau},
          {"sigma0", sigma0},       {"r", r},              {"sup", sup},
          {"safety", safety},       {"margin", margin},    {"nodes", nodes},
          {"zero", {zero.real(), zero.imag()}},            {"zero_abs", zero_abs},
          {"newton_iterations", newton_iterations},        {"zero_inside", zero_inside},
          {"reason", reason}};
}

RoucheCertificate rouche_localize(double alpha, double tau, double sigma0, double r) {
  if (!(sigma0 > 0.5 && sigma0 < 1.0 && r > 0.0 && r < std::min(sigma0 - 0.5, 1.0 - sigma0)))
    throw DomainError("rouche_localize: need 0 < r < min(sigma0 - 1/2, 1 - sigma0)");
  if (!(alpha > 0.0) || !std::isfinite(tau)) throw DomainError("rouche_localize: bad alpha or tau");
  RoucheCertificate cert;
  cert.alpha = alpha;
  cert.tau = tau;
  cert.sigma0 = sigma0;
  cert.r = r;
  for (int P = 128; P <= 1024; P *= 2) {
    std::vector<Complex> nodes(P);
    for (int j = 0; j < P; ++j) nodes[j] = sigma0 + std::polar(r, kTwoPi * j / P);
    const std::vector<Complex> zv = shift_grid(alpha, nodes, {tau});
    std::vector<Complex> g(P);
    for (int j = 0; j < P; ++j) g[j] = zv[j] - (nodes[j] - sigma0);
    double sup = 0.0, slope = 0.0;
    const double h = kTwoPi / P;
    for (int j = 0; j < P; ++j) {
      sup = std::max(sup, std::abs(g[j]));
      slope = std::max(slope, std::abs(g[(j + 1) % P] - g[j]) / h);
    }
    // |g| can exceed the sampled max by at most h/2 * max|dg/dtheta| between
    // nodes; the difference-quotient estimate of that slope is doubled.
    cert.sup = sup;
    cert.safety = 2.0 * slope * h / 2.0;
    cert.margin = r - sup - cert.safety;
    cert.nodes = P;
    if (sup >= r) {
      cert.reason = "inequality fails at a sampled point";
      return cert;
    }
    if (cert.margin > 0.0) {
      cert.issued = true;
      break;
    }
  }
  if (!cert.issued) {
    cert.reason = "margin below the sampling safety allowance";
    return cert;
  }
  const LocalizedZero z = newton_polish(alpha, Complex(sigma0, tau));
  cert.zero = z.center;
  cert.zero_abs = z.abs_value;
  cert.newton_iterations = z.newton_iterations;
  cert.zero_inside = std::abs(z.center - Complex(sigma0, tau)) < r;
  cert.reason = z.converged ? "certified" : "certified; Newton did not reach 1e-10";
  return cert;
}

}  // namespace hurlab
