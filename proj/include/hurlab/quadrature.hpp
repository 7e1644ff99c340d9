#pragma once

#include <vector>

namespace hurlab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point rule, computed once per n and cached (thread-safe).
const GaussRule& gauss_legendre(int n);

// Nodes and weights of a composite rule on [a, b] with `panels` equal panels
// of `order` points each.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1D composite_gauss(double a, double b, int panels, int order);

template <class F>
double integrate(const Rule1D& rule, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(rule.x[i]);
  return acc;
}

}  // namespace hurlab
