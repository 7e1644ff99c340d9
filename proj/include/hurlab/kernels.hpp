#pragma once

// Vertical-shift evaluation of zeta(s + i tau, alpha) over a node set and a
// tau grid. The parallel kernel shares the factors (n + alpha)^{-s_j} across
// all tau and (n + alpha)^{-i tau} across all nodes; the serial reference
// calls hurwitz() point by point.

#include <vector>

#include "hurlab/common.hpp"

namespace hurlab {

// Values laid out as out[k * nodes.size() + j] = zeta(nodes[j] + i taus[k], alpha).
std::vector<Complex> shift_grid_serial(double alpha, const std::vector<Complex>& nodes,
                                       const std::vector<double>& taus);
std::vector<Complex> shift_grid(double alpha, const std::vector<Complex>& nodes,
                                const std::vector<double>& taus, double target_abs_error = 1e-12);

// out[k] = max_j |zeta(nodes[j] + i taus[k], alpha) - targets[j]|.
std::vector<double> shift_sup_serial(double alpha, const std::vector<Complex>& nodes,
                                     const std::vector<Complex>& targets,
                                     const std::vector<double>& taus);
std::vector<double> shift_sup(double alpha, const std::vector<Complex>& nodes,
                              const std::vector<Complex>& targets, const std::vector<double>& taus);

}  // namespace hurlab
