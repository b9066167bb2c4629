#pragma once

#include <Eigen/Dense>

namespace vcdg {

// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree 2n-1.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int exactness() const { return 2 * static_cast<int>(nodes.size()) - 1; }
};

// Cached rule with n points.
const GaussRule& gauss_rule(int n_points);

// Smallest cached rule integrating degree `deg` exactly.
const GaussRule& gauss_rule_for_degree(int deg);

// Legendre polynomial values P_0..P_k at x (vals has k+1 entries);
// derivs, when non-null, receives P'_0..P'_k.
void legendre_eval(int k, double x, double* vals, double* derivs = nullptr);

double legendre(int k, double x);

} // namespace vcdg
