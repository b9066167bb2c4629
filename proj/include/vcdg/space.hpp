#pragma once

#include <Eigen/SparseCholesky>

#include "vcdg/operators.hpp"

namespace vcdg {

// A broken field whose traces match at every skeleton face.
struct ContinuousField {
  BrokenField field;
  double continuity_defect = 0.0; // max |jump| over the skeleton
};

double max_abs_jump(const BrokenField& f, int deriv = 0);

// L2-orthogonal projection onto the continuous piecewise polynomials of
// degree q. The global mass system is assembled once (nodal hats plus
// interior bubbles) and reused across applications.
class ContinuousProjector {
public:
  ContinuousProjector(MeshPtr mesh, int degree);

  int degree() const { return degree_; }
  const MeshPtr& mesh() const { return mesh_; }

  ContinuousField apply(const BrokenField& f) const;
  ContinuousField apply(const ScalarFn& f) const;

  double last_residual() const { return last_residual_; }

private:
  MeshPtr mesh_;
  int degree_;
  int n_continuous_ = 0;
  Eigen::SparseMatrix<double> to_broken_; // continuous dof -> orthonormal coeffs
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> mass_;
  mutable double last_residual_ = 0.0;
};

// Ritz projection with respect to the interior-penalty form, pinned by a
// mean-value constraint (one Lagrange multiplier row).
BrokenField ritz_project(const ScalarFn& u0, const ScalarFn& du0, MeshPtr mesh,
                         int degree, double sigma);

} // namespace vcdg
