#include "hurlab/cli.hpp"

#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hurlab/bselberg.hpp"
#include "hurlab/census.hpp"
#include "hurlab/geometry.hpp"
#include "hurlab/hzeta.hpp"
#include "hurlab/parallel.hpp"
#include "hurlab/randmodel.hpp"
#include "hurlab/smoothing.hpp"

#ifndef HURLAB_VERSION
#define HURLAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace hurlab::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long to_long(const std::string& s) {
  std::size_t pos = 0;
  long v = std::stol(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string AlphaLiteral::text() const {
  switch (kind) {
    case Kind::sqrt:
      if (q == 1) return "sqrt:" + std::to_string(d) + ":" + std::to_string(p) + ":" + std::to_string(r);
      return "sqrt:" + std::to_string(d) + ":" + std::to_string(p) + ":" + std::to_string(q) + ":" +
             std::to_string(r);
    case Kind::rat:
      return "rat:" + std::to_string(a) + ":" + std::to_string(den);
    case Kind::decimal:
      return decimal_text;
  }
  return {};
}

std::optional<AlgebraicParam> AlphaLiteral::algebraic() const {
  if (kind != Kind::sqrt) return std::nullopt;
  return make_param(static_cast<int>(d), p, q, r);
}

AlphaLiteral parse_alpha(const std::string& s) {
  AlphaLiteral lit;
  const auto parts = split(s, ':');
  if (parts.empty()) throw std::invalid_argument("empty alpha literal");
  if (parts[0] == "sqrt") {
    if (parts.size() != 4 && parts.size() != 5)
      throw std::invalid_argument("alpha literal: expected sqrt:d:p:r or sqrt:d:p:q:r, got " + s);
    lit.kind = AlphaLiteral::Kind::sqrt;
    lit.d = to_long(parts[1]);
    lit.p = to_long(parts[2]);
    lit.q = parts.size() == 5 ? to_long(parts[3]) : 1;
    lit.r = to_long(parts.back());
    lit.value = lit.algebraic()->float_value;
  } else if (parts[0] == "rat") {
    if (parts.size() != 3) throw std::invalid_argument("alpha literal: expected rat:a:q, got " + s);
    lit.kind = AlphaLiteral::Kind::rat;
    lit.a = to_long(parts[1]);
    lit.den = to_long(parts[2]);
    if (lit.den <= 0 || lit.a <= 0) throw std::invalid_argument("alpha literal: rat:a:q needs a, q > 0");
    lit.value = double(lit.a) / double(lit.den);
  } else {
    if (parts.size() != 1) throw std::invalid_argument("alpha literal: unknown form " + s);
    lit.kind = AlphaLiteral::Kind::decimal;
    lit.value = to_double(s);
    lit.decimal_text = s;
    if (!(lit.value > 0.0)) throw std::invalid_argument("alpha must be positive");
  }
  return lit;
}

Complex parse_complex(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {to_double(trim(parts[0])), 0.0};
  if (parts.size() == 2) return {to_double(trim(parts[0])), to_double(trim(parts[1]))};
  throw std::invalid_argument("expected re,im: " + s);
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_double(trim(p)));
  return out;
}

RelationTuple parse_tuple(const std::string& s) {
  RelationTuple t;
  for (const auto& item : split(s, ',')) {
    const auto nm = split(trim(item), ':');
    if (nm.size() != 2) throw std::invalid_argument("tuple entries are n:m, got " + item);
    t.emplace_back(to_long(nm[0]), to_long(nm[1]));
  }
  return t;
}

namespace {

struct Options {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir;
  bool json_out = false;

  std::string alpha, s = "0.75,0";
  int deriv = -1;

  // smooth
  std::string Ns = "10,50,100,200";
  double delta = 0.0, v_cutoff = 80.0;
  bool trend = false;
  double T = 100.0;
  int tau_samples = 200, M = 3, edge_points = 64;

  // simulate
  std::string experiment;
  std::string variant = "X", tuple = "0:1,2:1";
  long trials = 100000;
  int N = 3;

  // fit
  std::string rect_u = "0.6,0.9,0,1", target = "planted", init = "greedy";
  int t_panels = 1, sweeps = 200;

  // bs
  double frac = 0.3;
  std::string Deltas = "10,100,1000";
  long samples = 10000;

  // zeros
  std::string rect;
  bool locate = false;
  int refine = 0;
  double base_step = 0.05;

  // shifts
  std::string disc, box;
  double eps = 0.1, tau_lo = 0.0, step = 0.05;
  int grid = 32;
  bool full_grid = false, rouche = false;

  // replay
  std::string record;
};

struct Outcome {
  int code = 0;
  json result;
  std::vector<std::pair<std::string, std::string>> artifacts;  // file name, content
  std::string text;                                            // human-readable stdout
};

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

Outcome cmd_eval(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  const Complex s = parse_complex(o.s);
  Outcome out;
  out.result = {{"alpha", a.text()}, {"s", cjson(s)}};
  if (o.deriv >= 0) {
    const Complex v = derivative(o.deriv, s, a.value);
    out.result["deriv"] = o.deriv;
    out.result["value"] = cjson(v);
  } else {
    const EvalResult r = hurwitz_eval(s, a.value);
    out.result["value"] = cjson(r.value);
    out.result["error_bound"] = r.error_bound;
    out.result["terms"] = r.terms;
    out.result["out_of_range"] = r.out_of_range;
  }
  const auto v = out.result["value"];
  std::ostringstream t;
  t << std::setprecision(17) << v[0].get<double>() << " " << v[1].get<double>() << "\n";
  out.text = t.str();
  return out;
}

Outcome cmd_smooth(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  Outcome out;
  std::ostringstream csv;
  csv << std::setprecision(17);
  json rows = json::array();
  if (o.trend) {
    std::vector<long> Ns;
    for (double n : parse_doubles(o.Ns)) Ns.push_back(static_cast<long>(n));
    const DistanceTrend tr = distance_trend(a.value, Ns, o.T, o.tau_samples, o.M, o.edge_points);
    csv << "N,mean_distance\n";
    for (std::size_t i = 0; i < tr.N.size(); ++i) {
      csv << tr.N[i] << "," << tr.mean_distance[i] << "\n";
      rows.push_back({{"N", tr.N[i]}, {"mean_distance", tr.mean_distance[i]}});
    }
    out.result = {{"alpha", a.text()}, {"trend", rows}};
  } else {
    const Complex s = parse_complex(o.s);
    const double delta = o.delta > 0.0 ? o.delta : 0.5 * (s.real() - 0.5);
    csv << "N,residual,tail_bound,lhs_re,lhs_im,rhs_re,rhs_im\n";
    for (double n : parse_doubles(o.Ns)) {
      const long N = static_cast<long>(n);
      const Lemma34Result r = lemma34_residual(s, a.value, N, delta, o.v_cutoff);
      csv << N << "," << r.residual << "," << r.tail_bound << "," << r.lhs.real() << "," << r.lhs.imag() << ","
          << r.rhs.real() << "," << r.rhs.imag() << "\n";
      rows.push_back({{"N", N}, {"residual", r.residual}, {"tail_bound", r.tail_bound}});
    }
    out.result = {{"alpha", a.text()}, {"s", cjson(s)}, {"delta", delta}, {"v_cutoff", o.v_cutoff}, {"rows", rows}};
  }
  out.artifacts.emplace_back("smooth.csv", csv.str());
  out.text = csv.str();
  return out;
}

AlgebraicParam need_algebraic(const AlphaLiteral& a) {
  auto p = a.algebraic();
  if (!p) throw std::invalid_argument("this experiment needs an exact quadratic literal sqrt:d:p:r or sqrt:d:p:q:r");
  return *p;
}

Outcome cmd_simulate(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  json row = {{"experiment", o.experiment}, {"seed", o.seed}};
  json params = {{"alpha", a.text()}};
  if (o.experiment == "moment") {
    const Variant v = o.variant == "Y" ? Variant::Y : Variant::X;
    if (o.variant != "X" && o.variant != "Y") throw std::invalid_argument("--variant must be X or Y");
    const RelationTuple t = parse_tuple(o.tuple);
    // the Y model needs no field arithmetic; any alpha literal works there
    const AlgebraicParam ap = v == Variant::X ? need_algebraic(a) : make_param(2, -1, 1, 1);
    const MomentEstimate m = moment_estimate(v, ap, t, o.trials, o.seed);
    params["variant"] = o.variant;
    params["tuple"] = o.tuple;
    row["estimate"] = cjson(m.mean);
    row["stderr"] = m.std_error;
    row["trials"] = m.trials;
    row["exact_relation"] = m.exact_relation;
  } else if (o.experiment == "torus") {
    const AlgebraicParam ap = need_algebraic(a);
    const TorusFourier tf = torus_fourier(ap, parse_tuple(o.tuple), o.T);
    params["tuple"] = o.tuple;
    params["T"] = o.T;
    row["estimate"] = cjson(tf.value);
    row["stderr"] = 0.0;
    row["trials"] = 0;
    row["delta"] = tf.delta;
    row["relation"] = tf.relation;
    if (!tf.relation) row["bound"] = 2.0 / (std::abs(tf.delta) * o.T);
  } else if (o.experiment == "omega0") {
    const AlgebraicParam ap = need_algebraic(a);
    const Omega0Report r = omega0_experiment(ap, o.N, o.delta > 0.0 ? o.delta : 0.3, o.trials, o.seed);
    params["N"] = r.N;
    params["delta"] = r.delta;
    row["estimate"] = r.p_hat;
    row["P_omega0"] = r.p_hat;
    row["stderr"] = r.null_stderr;
    row["trials"] = r.trials;
    row["hits"] = r.hits;
    row["p_independent"] = r.p_independent;
    row["z_score"] = r.z_score;
    row["deviation_flag"] = std::abs(r.z_score) > 5.0;
    row["relation_flag"] = r.relation_flag;
    row["rank"] = r.rank;
    row["relations"] = r.relations;
    row["mean_square_conditional"] = r.mean_square_conditional;
    row["mean_square_cond_stderr"] = r.mean_square_cond_stderr;
    row["mean_square_on_omega0"] = r.mean_square_on_omega0;
    row["mean_square_independent"] = r.mean_square_independent;
  } else if (o.experiment == "partial") {
    const AlgebraicParam ap = need_algebraic(a);
    std::vector<long> Ns;
    for (double n : parse_doubles(o.Ns)) Ns.push_back(static_cast<long>(n));
    long nmax = 0;
    for (long n : Ns) nmax = std::max(nmax, 2 * n);
    OrdTable table(ap, nmax);
    params["Ns"] = Ns;
    row["estimate"] = partial_sum_increments(table, Ns, o.seed, o.edge_points);
    row["stderr"] = nullptr;
    row["trials"] = 1;
  } else {
    throw std::invalid_argument("simulate: unknown experiment '" + o.experiment + "' (moment, torus, omega0, partial)");
  }
  row["params"] = params;
  Outcome out;
  out.result = row;
  out.artifacts.emplace_back("simulate.json", dump_json(json::array({row})));
  out.text = dump_json(row);
  return out;
}

Outcome cmd_fit(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  const std::vector<double> u = parse_doubles(o.rect_u);
  if (u.size() != 4) throw std::invalid_argument("--rect-u expects sigma_a,sigma_b,t_a,t_b");
  RectDomainU U{u[0], u[1], u[2], u[3]};
  U.t_panels = o.t_panels;
  auto grid = make_grid(U);
  json extra;
  GridFunction f;
  if (o.target == "planted") {
    std::vector<Complex> g(o.N + 1);
    for (int n = 0; n <= o.N; ++n) g[n] = std::polar(1.0, kTwoPi * uniform01(o.seed, 7, static_cast<std::uint64_t>(n)));
    f.grid = grid;
    f.values.assign(grid->nodes.size(), Complex(0.0, 0.0));
    for (int n = 0; n <= o.N; ++n) {
      GridFunction x = GridFunction::dirichlet_term(grid, a.value, n);
      for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += g[n] * x.values[i];
    }
    std::vector<double> ang;
    for (Complex z : g) ang.push_back(std::arg(z));
    extra["planted_phases"] = ang;
  } else if (o.target.rfind("poly:", 0) == 0) {
    std::vector<Complex> c;
    for (const auto& item : split(o.target.substr(5), ';')) c.push_back(parse_complex(item));
    f = GridFunction::sample(grid, [c](Complex s) {
      Complex acc(0.0, 0.0);
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
      return acc;
    });
  } else {
    throw std::invalid_argument("--target must be planted or poly:c0;c1;... with each c as re,im");
  }
  GammaFitOptions opt;
  opt.max_sweeps = o.sweeps;
  opt.seed = o.seed;
  if (o.init == "greedy") opt.init = PhaseInit::greedy;
  else if (o.init == "random") opt.init = PhaseInit::random;
  else throw std::invalid_argument("--init must be greedy or random");
  const GammaFitResult r = gamma_fit(f, a.value, o.N, opt);
  std::vector<double> ang;
  for (Complex z : r.gamma) ang.push_back(std::arg(z));
  Outcome out;
  out.result = {{"alpha", a.text()},
                {"N", o.N},
                {"U", u},
                {"residual", r.residual},
                {"target_norm", bergman_norm(f)},
                {"sweeps", r.sweeps},
                {"history", r.history},
                {"budget_exhausted", r.budget_exhausted},
                {"phases", ang}};
  out.result.update(extra);
  out.artifacts.emplace_back("fit.json", dump_json(out.result));
  std::ostringstream t;
  t << std::setprecision(6) << "residual " << r.residual << " after " << r.sweeps << " sweeps\n";
  out.text = t.str();
  return out;
}

Outcome cmd_bs(const Options& o) {
  json rep;
  json hv = json::array(), uv = json::array(), pv = json::array(), u0 = json::array(), l51 = json::array();
  const long n = o.samples;
  for (long i = 0; i < n; ++i) {
    const double x = -50.0 + 100.0 * uniform01(o.seed, 1, static_cast<std::uint64_t>(i));
    const double h = bs_H(x), k = bs_K(x), sg = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    if (std::abs(sg - h) > k + 1e-12 || std::abs(h) > 1.0 + 1e-12) hv.push_back({{"x", x}, {"H", h}, {"K", k}});
  }
  for (double D : parse_doubles(o.Deltas)) {
    const ArcSpec arc{0.5, 0.5 + kTwoPi * o.frac, D};
    for (long i = 0; i < n; ++i) {
      const double x = -10.0 + 20.0 * uniform01(o.seed, 2, static_cast<std::uint64_t>(i));
      const double ind = (x > arc.s && x < arc.t) ? 1.0 : 0.0;
      const double U = bs_U(arc, x), K = bs_Kst(arc, x);
      if (std::abs(ind - U) > K + 1e-12) uv.push_back({{"Delta", D}, {"x", x}, {"U", U}, {"K", K}});
    }
    const Periodized P = periodized(arc);
    const long m = std::min<long>(n, 1000);
    for (long i = 0; i < m; ++i) {
      const double th = kTwoPi * uniform01(o.seed, 3, static_cast<std::uint64_t>(i));
      const double ind = arc.contains(th) ? 1.0 : 0.0;
      const double U = P.U.eval_real(th), K = P.K.eval_real(th);
      if (std::abs(ind - U) > K + 1e-9 || K < -1e-12) pv.push_back({{"Delta", D}, {"theta", th}, {"U", U}, {"K", K}});
    }
    const double U0 = bs_U_transform(arc, 0.0).real();
    u0.push_back({{"Delta", D}, {"U0", U0}, {"arc_length", kTwoPi * o.frac}, {"within_10_over_Delta",
                  std::abs(U0 - kTwoPi * o.frac) <= 10.0 / D}});
    std::vector<ArcSpec> arcs;
    for (int j = 0; j < 3; ++j) arcs.push_back({0.5 + 2.0 * j, 0.5 + 2.0 * j + kTwoPi * o.frac, D});
    const Lemma51Report lr = lemma51_check(arcs, std::min<long>(n, 2000), o.seed);
    l51.push_back({{"Delta", D}, {"N", 2}, {"max_ratio", lr.max_ratio}, {"skipped", lr.skipped},
                   {"within_constant_10", lr.max_ratio <= 10.0}});
  }
  rep = {{"samples", n},
         {"violations", {{"H", hv}, {"U", uv}, {"periodized", pv}}},
         {"U0", u0},
         {"lemma51", l51}};
  Outcome out;
  out.result = rep;
  out.artifacts.emplace_back("bs.json", dump_json(rep));
  out.text = dump_json(rep);
  return out;
}

RectContour parse_rect(const std::string& s) {
  const auto v = parse_doubles(s);
  if (v.size() != 4) throw std::invalid_argument("--rect expects sigma1,sigma2,t_lo,t_hi");
  RectContour c;
  c.sigma1 = v[0];
  c.sigma2 = v[1];
  c.t_lo = v[2];
  c.t_hi = v[3];
  return c;
}

Outcome cmd_zeros(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  RectContour c = parse_rect(o.rect);
  c.refine = o.refine;
  c.base_step = o.base_step;
  const CensusReport rep = o.locate ? locate_zeros(a.value, c) : count_zeros(a.value, c);
  Outcome out;
  out.result = rep.to_json();
  out.result["alpha"] = a.text();
  out.artifacts.emplace_back("census.json", dump_json(out.result));
  out.text = "count " + std::to_string(rep.count) + "\n";
  return out;
}

Outcome cmd_shifts(const Options& o) {
  const AlphaLiteral a = parse_alpha(o.alpha);
  ShiftDomain K;
  if (!o.disc.empty()) {
    const auto v = parse_doubles(o.disc);
    if (v.size() != 3) throw std::invalid_argument("--disc expects re,im,radius");
    K = ShiftDomain::disc({v[0], v[1]}, v[2]);
  } else if (!o.box.empty()) {
    const auto v = parse_doubles(o.box);
    if (v.size() != 4) throw std::invalid_argument("--box expects sigma_lo,sigma_hi,t_lo,t_hi");
    K = ShiftDomain::rect(v[0], v[1], v[2], v[3]);
  } else {
    throw std::invalid_argument("shifts: give --disc or --box");
  }
  HolFn f;
  if (o.target == "linear") {
    const double s0 = K.kind == ShiftDomain::Kind::disc ? K.center.real() : 0.5 * (K.sigma_lo + K.sigma_hi);
    f = [s0](Complex s) { return s - s0; };
  } else if (o.target.rfind("const:", 0) == 0) {
    const Complex c = parse_complex(o.target.substr(6));
    f = [c](Complex) { return c; };
  } else {
    throw std::invalid_argument("shifts: --target must be linear or const:re,im");
  }
  if (o.rouche && (K.kind != ShiftDomain::Kind::disc || o.target != "linear"))
    throw std::invalid_argument("shifts: --rouche needs --disc and --target linear");
  ShiftOptions opt;
  opt.tau_lo = o.tau_lo;
  opt.tau_step = o.step;
  opt.grid = o.grid;
  opt.boundary_only = !o.full_grid;
  const ShiftSearchResult r = shift_search(a.value, K, f, o.target, o.eps, o.T, opt);

  std::ostringstream csv;
  csv << std::setprecision(17) << "tau,sup_dist\n";
  for (std::size_t k = 0; k < r.taus.size(); ++k) csv << r.taus[k] << "," << r.sup_dist[k] << "\n";
  Outcome out;
  out.result = {{"alpha", a.text()},
                {"target", o.target},
                {"eps", o.eps},
                {"T", o.T},
                {"tau_lo", o.tau_lo},
                {"tau_step", o.step},
                {"grid_points", r.grid_points},
                {"passing", r.passing.size()},
                {"measure", r.measure},
                {"best", {{"tau", r.best.tau}, {"sup_dist", r.best.sup_dist}}}};
  if (o.rouche) {
    json certs = json::array();
    bool any = false;
    std::vector<ShiftRecord> cand = r.passing;
    std::sort(cand.begin(), cand.end(), [](const ShiftRecord& x, const ShiftRecord& y) { return x.sup_dist < y.sup_dist; });
    if (cand.size() > 20) cand.resize(20);
    if (cand.empty()) cand.push_back(r.best);
    for (const auto& rec : cand) {
      const RoucheCertificate c = rouche_localize(a.value, rec.tau, K.center.real(), K.radius);
      any = any || c.issued;
      certs.push_back(c.to_json());
    }
    out.result["certificates"] = certs;
    if (!any) out.code = 2;
  }
  out.artifacts.emplace_back("shifts.csv", csv.str());
  out.artifacts.emplace_back("shifts.json", dump_json(out.result));
  std::ostringstream t;
  t << std::setprecision(6) << "best tau " << r.best.tau << " sup " << r.best.sup_dist << ", " << r.passing.size()
    << " grid points below eps\n";
  out.text = t.str();
  return out;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string make_run_id(const std::string& sub, const std::vector<std::string>& args) {
  const auto ns = std::chrono::system_clock::now().time_since_epoch().count();
  std::string key = std::to_string(ns);
  for (const auto& a : args) key += "\x1f" + a;
  const std::uint64_t h = mix64(std::hash<std::string>{}(key));
  std::ostringstream s;
  s << sub << "-" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

fs::path resolve_out(const Options& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "hurlab-runs";
}

int replay(const Options& o, std::ostream& out, std::ostream& err);

int run_impl(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  const std::vector<std::string>& args = raw;
  Options o;
  CLI::App app{"Hurwitz zeta numerical laboratory", "hurlab"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", o.seed, "Base seed for all random draws");
  app.add_option("--threads", o.threads, "Worker threads (capped at the processor count)");
  app.add_option("--out", o.out_dir, std::string("Output directory (default $") + kOutEnv + " or ./hurlab-runs)");
  app.add_flag("--json", o.json_out, "Print the JSON result instead of text");
  app.set_config("--config", "", "TOML file (key = value, [subcommand] sections) merged under the command line");

  auto alpha = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--alpha", o.alpha, "sqrt:d:p:r, sqrt:d:p:q:r, rat:a:q or a decimal");
    if (required) opt->required();
  };
  std::map<std::string, std::function<Outcome(const Options&)>> handlers;

  auto* ev = app.add_subcommand("eval", "Evaluate zeta(s, alpha) or a derivative");
  alpha(ev);
  ev->add_option("--s", o.s, "re,im")->required();
  ev->add_option("--deriv", o.deriv, "Derivative order");
  handlers["eval"] = cmd_eval;

  auto* sm = app.add_subcommand("smooth", "Smoothed-sum identity residuals (CSV)");
  alpha(sm);
  sm->add_option("--s", o.s, "re,im");
  sm->add_option("--N", o.Ns, "Comma-separated N values");
  sm->add_option("--delta", o.delta, "Contour offset (default (Re s - 1/2)/2)");
  sm->add_option("--v-cutoff", o.v_cutoff, "Vertical integral cutoff");
  sm->add_flag("--trend", o.trend, "Averaged distance to the smoothed sums instead");
  sm->add_option("--T", o.T, "tau range for --trend");
  sm->add_option("--tau-samples", o.tau_samples);
  sm->add_option("--M", o.M, "Boxes K_1..K_M in the metric");
  sm->add_option("--edge-points", o.edge_points);
  handlers["smooth"] = cmd_smooth;

  auto* si = app.add_subcommand("simulate", "Random-model experiments (JSON rows)");
  si->add_option("experiment", o.experiment, "moment, torus, omega0 or partial")->required();
  alpha(si);
  si->add_option("--variant", o.variant, "X or Y");
  si->add_option("--tuple", o.tuple, "n:m,n:m,...");
  si->add_option("--trials", o.trials);
  si->add_option("--N", o.N);
  si->add_option("--delta", o.delta, "Arc fraction for omega0 (default 0.3)");
  si->add_option("--T", o.T);
  si->add_option("--Ns", o.Ns, "N values for partial");
  si->add_option("--edge-points", o.edge_points);
  handlers["simulate"] = cmd_simulate;

  auto* fi = app.add_subcommand("fit", "Unimodular phase fit in A^2(U)");
  alpha(fi);
  fi->add_option("--N", o.N);
  fi->add_option("--rect-u", o.rect_u, "sigma_a,sigma_b,t_a,t_b");
  fi->add_option("--t-panels", o.t_panels);
  fi->add_option("--target", o.target, "planted or poly:c0;c1;...");
  fi->add_option("--init", o.init, "greedy or random");
  fi->add_option("--sweeps", o.sweeps);
  handlers["fit"] = cmd_fit;

  auto* bs = app.add_subcommand("bs", "Beurling-Selberg inequality report");
  bs->add_option("--frac", o.frac, "Arc length as a fraction of 2 pi");
  bs->add_option("--Delta", o.Deltas, "Comma-separated Delta values");
  bs->add_option("--samples", o.samples);
  handlers["bs"] = cmd_bs;

  auto* ze = app.add_subcommand("zeros", "Argument-principle zero census");
  alpha(ze);
  ze->add_option("--rect", o.rect, "sigma1,sigma2,t_lo,t_hi")->required();
  ze->add_flag("--locate", o.locate, "Also localize and polish each zero");
  ze->add_option("--refine", o.refine, "Extra bisection levels of the base step");
  ze->add_option("--step", o.base_step, "Base segment length");
  handlers["zeros"] = cmd_zeros;

  auto* sh = app.add_subcommand("shifts", "Scan vertical shifts against a target");
  alpha(sh);
  sh->add_option("--disc", o.disc, "re,im,radius");
  sh->add_option("--box", o.box, "sigma_lo,sigma_hi,t_lo,t_hi");
  sh->add_option("--target", o.target, "linear or const:re,im");
  sh->add_option("--eps", o.eps);
  sh->add_option("--T", o.T);
  sh->add_option("--tau-lo", o.tau_lo);
  sh->add_option("--step", o.step);
  sh->add_option("--grid", o.grid);
  sh->add_flag("--full-grid", o.full_grid, "Sample all of K instead of its boundary");
  sh->add_flag("--rouche", o.rouche, "Try a Rouche certificate at the best passing shifts");
  handlers["shifts"] = cmd_shifts;

  auto* rp = app.add_subcommand("replay", "Re-run a recorded run and compare outputs");
  rp->add_option("record", o.record, "Path to a .run.json file")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  // shifts and fit share --target; only fit defaults to planted
  if (sh->parsed() && o.target == "planted") o.target = "linear";
  if (o.threads > 0) o.threads = par::set_threads(o.threads);
  else o.threads = par::max_threads();

  if (rp->parsed()) return replay(o, out, err);

  const std::string sub = app.get_subcommands().front()->get_name();
  const std::string start = iso_now();
  Outcome res;
  try {
    res = handlers.at(sub)(o);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string end = iso_now();

  std::vector<std::string> argv_rec;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--out" || args[i] == "--config") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0 || args[i].rfind("--config=", 0) == 0) continue;
    argv_rec.push_back(args[i]);
  }
  const std::string id = make_run_id(sub, args);
  json params = json::object();
  for (const CLI::App* scope : std::array<const CLI::App*, 2>{&app, app.get_subcommand(sub)})
    for (const CLI::Option* op : scope->get_options()) {
      const std::string name = op->get_lnames().empty() ? op->get_name() : op->get_lnames().front();
      if (name == "help" || name == "config") continue;
      params[name] = op->count() > 0 ? op->as<std::string>() : op->get_default_str();
    }
  json record = {{"run_id", id},
                 {"subcommand", sub},
                 {"argv", argv_rec},
                 {"params", params},
                 {"config", app.config_to_str(false, false)},
                 {"seed", o.seed},
                 {"threads", o.threads},
                 {"start", start},
                 {"end", end},
                 {"version", HURLAB_VERSION},
                 {"exit_code", res.code},
                 {"result", res.result}};
  try {
    const fs::path dir = resolve_out(o) / id;
    fs::create_directories(dir);
    json paths = json::array();
    for (const auto& [name, content] : res.artifacts) {
      std::ofstream f(dir / name, std::ios::binary);
      f << content;
      paths.push_back((dir / name).string());
    }
    record["outputs"] = paths;
    std::ofstream f(dir / "run.json");
    f << dump_json(record);
    if (!f) throw std::runtime_error("cannot write " + (dir / "run.json").string());
    record["record_path"] = (dir / "run.json").string();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (o.json_out) out << dump_json(res.result);
  else out << res.text;
  return res.code;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int replay(const Options& o, std::ostream& out, std::ostream& err) {
  json rec;
  try {
    rec = json::parse(slurp(o.record));
  } catch (const std::exception& e) {
    err << "error: cannot read run record " << o.record << ": " << e.what() << "\n";
    return 1;
  }
  const fs::path here = fs::path(o.record).parent_path();
  const fs::path out_dir = here / "replay";
  std::vector<std::string> args{"hurlab", "--out", out_dir.string()};
  // values that came from a config file are replayed through one
  if (const std::string cfg = rec.value("config", ""); !cfg.empty()) {
    fs::create_directories(out_dir);
    const fs::path cfg_path = out_dir / "config.toml";
    std::ofstream(cfg_path) << cfg;
    args.push_back("--config");
    args.push_back(cfg_path.string());
  }
  for (const auto& a : rec.at("argv")) args.push_back(a.get<std::string>());
  std::ostringstream sink, sink_err;
  const int code = run_impl(args, sink, sink_err);
  if (code != rec.value("exit_code", 0)) {
    err << "replay: exit code " << code << " differs from recorded " << rec.value("exit_code", 0) << "\n"
        << sink_err.str();
    return 1;
  }
  // newest record under the replay directory
  fs::path latest;
  fs::file_time_type newest{};
  for (const auto& e : fs::directory_iterator(out_dir)) {
    const fs::path r = e.path() / "run.json";
    if (fs::exists(r) && (latest.empty() || fs::last_write_time(r) >= newest)) {
      latest = r;
      newest = fs::last_write_time(r);
    }
  }
  if (latest.empty()) {
    err << "replay: no record produced\n";
    return 1;
  }
  const json again = json::parse(slurp(latest));
  bool same = again.at("result") == rec.at("result");
  const auto& a = rec.at("outputs");
  const auto& b = again.at("outputs");
  same = same && a.size() == b.size();
  for (std::size_t i = 0; same && i < a.size(); ++i)
    same = slurp(a[i].get<std::string>()) == slurp(b[i].get<std::string>());
  if (!same) {
    err << "replay: outputs differ from " << o.record << "\n";
    return 1;
  }
  out << "replay: identical (" << again.at("run_id").get<std::string>() << ")\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace hurlab::cli
