#pragma once

// Zeros and vertical shifts of zeta(s, alpha) in the strip 1/2 < Re s < 1:
// argument-principle counts on rectangles, Newton-polished zero locations,
// scans for shifts approximating a target, and Rouche certificates.

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "hurlab/common.hpp"
#include "hurlab/geometry.hpp"

namespace hurlab {

struct RectContour {
  double sigma1 = 0.6, sigma2 = 0.9;
  double t_lo = 0.0, t_hi = 0.0;
  double base_step = 0.05;  // initial segment length along each edge
  int refine = 0;            // base_step is divided by 2^refine
  int max_depth = 40;        // bisections allowed per segment

  void validate() const;
};

struct LocalizedZero {
  Complex center;
  double radius = 0.0;     // 2 |zeta / zeta'| at the polished point
  double abs_value = 0.0;  // |zeta(center, alpha)|
  int newton_iterations = 0;
  bool converged = false;
};

struct CensusReport {
  RectContour rect;  // as used, after any nudges
  double alpha = 0.0;
  long count = 0;
  double winding = 0.0;  // total argument change / 2 pi before rounding
  double integrality_error = 0.0;
  std::array<double, 4> edge_winding{};  // bottom, right, top, left, in units of 2 pi
  int refinement = 0;
  int nudges = 0;
  long evaluations = 0;
  double min_abs = 0.0;  // smallest |zeta| seen on the contour
  std::vector<LocalizedZero> zeros;

  nlohmann::json to_json() const;
};

// Throws ContourError if a zero stays within ~1e-6 of the contour after ten
// nudges of the horizontal edges, or if the winding stays non-integral.
CensusReport count_zeros(double alpha, const RectContour& c);

// count_zeros plus localization: the rectangle is split in t until each piece
// holds one zero, which is then polished by Newton iteration.
CensusReport locate_zeros(double alpha, const RectContour& c);

// Damped Newton for zeta(s, alpha) = 0 from s0.
LocalizedZero newton_polish(double alpha, Complex s0, int max_iter = 60);

// Compact set for the shift scan: a closed disc or rectangle inside the strip.
struct ShiftDomain {
  enum class Kind { disc, rect } kind = Kind::disc;
  Complex center{0.75, 0.0};
  double radius = 0.1;
  double sigma_lo = 0.0, sigma_hi = 0.0, t_lo = 0.0, t_hi = 0.0;

  static ShiftDomain disc(Complex center, double radius);
  static ShiftDomain rect(double sigma_lo, double sigma_hi, double t_lo, double t_hi);
  void validate() const;
  // Boundary points (grid per quarter of the circle or per edge), or a full
  // grid x grid sample of the set.
  std::vector<Complex> nodes(int grid, bool boundary_only) const;
};

struct ShiftOptions {
  double tau_lo = 0.0;  // scan [tau_lo, T]
  double tau_step = 0.05;
  int grid = 32;
  // The difference zeta(s + i tau) - f(s) is holomorphic near K, so its sup
  // over K is attained on the boundary.
  bool boundary_only = true;
};

struct ShiftRecord {
  double tau = 0.0;
  double sup_dist = 0.0;
  double eps = 0.0;
  std::string target;
};

struct ShiftSearchResult {
  std::vector<ShiftRecord> passing;  // sup_dist < eps
  ShiftRecord best;                  // global minimizer on the tau grid
  double measure = 0.0;              // passing fraction of the grid times the scanned length
  std::vector<double> taus, sup_dist;
  long grid_points = 0;  // points of K used for the sup
};

ShiftSearchResult shift_search(double alpha, const ShiftDomain& K, const HolFn& f, const std::string& target,
                               double eps, double T, const ShiftOptions& opt = {});

struct DerivRecord {
  double tau = 0.0;
  double deriv_dist = 0.0;  // max_n |zeta^(n)(sigma0 + i tau) - z_n|
  double disc_sup = 0.0;    // sup_{|s - sigma0| = r} |zeta(s + i tau) - P(s)|
};

struct DerivSearchResult {
  std::vector<DerivRecord> records;  // every tau on the grid
  std::vector<double> passing_taus;  // deriv_dist < eps
  DerivRecord best;
  double eps = 0.0;
  double eps_prime = 0.0;  // eps / sum_{n <= N} n! / r^n
  double r = 0.0;
  double measure = 0.0;
  long cauchy_violations = 0;  // disc_sup < eps' but deriv_dist >= eps
};

// P(s) = sum_n z_n (s - sigma0)^n / n! is the polynomial with the requested
// derivatives; disc_sup < eps' implies deriv_dist < eps by Cauchy's estimate.
DerivSearchResult derivative_target_search(double alpha, double sigma0, const std::vector<Complex>& z, double eps,
                                           double T, double tau_step = 0.05, double r = 0.0,
                                           int circle_points = 128);

struct RoucheCertificate {
  bool issued = false;
  double alpha = 0.0, tau = 0.0, sigma0 = 0.0, r = 0.0;
  double sup = 0.0;     // sampled sup |zeta(s + i tau) - (s - sigma0)| on the circle
  double safety = 0.0;  // allowance for the variation between samples
  double margin = 0.0;  // r - sup - safety
  int nodes = 0;
  Complex zero;  // polished zero of zeta(., alpha), absolute coordinates
  double zero_abs = 0.0;
  int newton_iterations = 0;
  bool zero_inside = false;
  std::string reason;

  nlohmann::json to_json() const;
};

// Requires 0 < r < min(sigma0 - 1/2, 1 - sigma0); throws DomainError otherwise.
RoucheCertificate rouche_localize(double alpha, double tau, double sigma0, double r);

}  // namespace hurlab
