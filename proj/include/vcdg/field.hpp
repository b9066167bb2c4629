#pragma once

#include <Eigen/Dense>
#include <functional>

#include "vcdg/mesh.hpp"
#include "vcdg/quadrature.hpp"

namespace vcdg {

// Trace side at a mesh node: minus = limit from below, plus = from above.
enum class Side { minus, plus, interior };

using ScalarFn = std::function<double(double)>;

// Piecewise polynomial of degree <= p with no inter-element continuity.
// Coefficients are stored per element in the L2-orthonormal basis
//   phi_k(x) = sqrt((2k+1)/h_i) * P_k(xi),  xi = 2(x - x_i)/h_i - 1,
// so the global mass matrix is the identity and the L2 norm is the
// Euclidean norm of the coefficient vector.
class BrokenField {
public:
  BrokenField() = default;
  BrokenField(MeshPtr mesh, int degree);
  static BrokenField constant(MeshPtr mesh, int degree, double value);

  bool valid() const { return mesh_ != nullptr; }
  int degree() const { return degree_; }
  int n_elements() const { return mesh_->n_elements(); }
  int block() const { return degree_ + 1; }
  int dofs() const { return n_elements() * block(); }
  const MeshPtr& mesh() const { return mesh_; }

  Eigen::VectorXd& coeffs() { return c_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  double coeff(int elem, int k) const { return c_[elem * block() + k]; }
  double& coeff(int elem, int k) { return c_[elem * block() + k]; }

  // Point evaluation; a side is mandatory exactly at mesh nodes.
  // Periodic meshes identify the two domain endpoints.
  double eval(double x, Side side = Side::interior, int deriv = 0) const;
  double eval_in_element(int elem, double x, int deriv = 0) const;
  // One-sided value (or derivative) at an element endpoint.
  double trace(int elem, bool right_end, int deriv = 0) const;

  BrokenField derivative() const;       // exact elementwise derivative
  BrokenField embed(int q) const;       // represent in degree q >= degree
  BrokenField truncate(int q) const;    // L2 projection onto degree q <= degree

  double integral() const;
  double mean() const { return integral() / mesh_->length(); }
  double l2_norm_sq() const { return c_.squaredNorm(); }

  // Conversion to/from plain Legendre coefficients on the reference element.
  Eigen::VectorXd plain_coeffs(int elem) const;
  void set_plain_coeffs(int elem, const Eigen::VectorXd& a);

  double max_abs_sampled(int pts_per_elem = 201, int deriv = 0) const;

  BrokenField& operator+=(const BrokenField& o);
  BrokenField& operator-=(const BrokenField& o);
  BrokenField& operator*=(double s);
  friend BrokenField operator+(BrokenField a, const BrokenField& b) { return a += b; }
  friend BrokenField operator-(BrokenField a, const BrokenField& b) { return a -= b; }
  friend BrokenField operator*(double s, BrokenField a) { return a *= s; }

private:
  MeshPtr mesh_;
  int degree_ = -1;
  Eigen::VectorXd c_;
};

// Reference-element helpers on plain Legendre coefficients.
double plain_eval(const Eigen::VectorXd& a, double xi);
Eigen::VectorXd plain_derivative(const Eigen::VectorXd& a);      // d/dxi
Eigen::VectorXd plain_antiderivative(const Eigen::VectorXd& a);  // vanishes at xi=-1

// Elementwise L2 projection onto degree `degree`; quad_points = 0 picks a
// rule from `exact_degree` (degree of f if polynomial, else a safe default).
BrokenField project_l2(const ScalarFn& f, MeshPtr mesh, int degree,
                       int quad_points = 0);

// Pointwise composition g(u) projected onto `result_degree`. Exact when g is
// a polynomial and result_degree >= deg(g)*deg(u).
BrokenField compose(const BrokenField& u, const ScalarFn& g, int result_degree);

} // namespace vcdg
