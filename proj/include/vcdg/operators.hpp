#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "vcdg/field.hpp"

namespace vcdg {

// One-sided traces of a field at a skeleton face.
// Jump and average follow the v^- minus v^+ convention.
struct FaceTrace {
  double minus = 0.0;
  double plus = 0.0;
  double jump() const { return minus - plus; }
  double avg() const { return 0.5 * (minus + plus); }
};

std::vector<FaceTrace> traces(const BrokenField& f, int deriv = 0);
FaceTrace face_trace(const BrokenField& f, const Face& e, int deriv = 0);

// Weight applied to squared jumps in skeleton sums.
enum class FaceWeight { one, inv_h_mean, h_mean, h_left, h_right };

double jump_norm_sq(const BrokenField& f, FaceWeight w, int deriv = 0);

// Discrete gradient: the broken derivative lifted with one-sided jump
// terms, characterized by
//   int G[psi] Phi = sum_K int psi' Phi - sum_E [[psi]] Phi^side.
BrokenField discrete_gradient(const BrokenField& psi, Side side);

// zero_bc_lift adds the boundary lift with ghost value 0 on natural meshes
// (weak imposition of a homogeneous boundary value); it restores exact
// skew-adjointness against the opposite-side interior gradient. Periodic
// meshes are unaffected.
Eigen::SparseMatrix<double> gradient_matrix(const MeshPtr& mesh, int degree, Side side,
                                            bool zero_bc_lift = false);

// Continuous degree-(p+1) reconstruction with prescribed one-sided nodal
// traces (D^side[Psi])^side = Psi^{-side} and moment matching against
// degree p-1; its derivative L2-projects onto the discrete gradient.
BrokenField discrete_reconstruction(const BrokenField& psi, Side side);

// Elementwise projector onto degree `degree`: matches both endpoint values
// of w and its moments against degree-2 polynomials. The remainder w - Sw
// is jump-free, so its broken H1 seminorm measures the dG-norm distance of
// w to the space. Needs degree >= 1.
BrokenField nodal_projection(const BrokenField& w, int degree);

// Symmetric interior-penalty form for the 1D Laplacian,
//   A(u,z) = sum_K int u'z' - int_E ([[u]]{z'} + [[z]]{u'}) + int_E (sigma/h_E)[[u]][[z]],
// coercive in the dG seminorm for sigma large enough.
Eigen::SparseMatrix<double> ip_form_matrix(const MeshPtr& mesh, int degree, double sigma);
double ip_form(const BrokenField& u, const BrokenField& z, double sigma);

// A(u0, .) for a globally smooth u0 given through its derivative;
// value and penalty jumps of u0 vanish.
Eigen::VectorXd ip_form_smooth_rhs(const ScalarFn& du0, const MeshPtr& mesh,
                                   int degree, int quad_points = 0);

double default_penalty(int degree); // 10 (p+1)^2

// Broken H1 seminorm plus h_E^{-1}-weighted jumps.
double dg_seminorm_sq(const BrokenField& u);
double dg_seminorm(const BrokenField& u);

// |f|_{H^k(K)}^2 = int_K (d^k f)^2 for the elementwise polynomial f.
double sobolev_seminorm_sq_element(const BrokenField& f, int k, int elem);

// Residuals of the elementwise integration identities; exact up to roundoff
// for polynomial inputs. Natural meshes include the domain-boundary terms
// that the skeleton omits.
double elementwise_ibp_residual(const BrokenField& psi, const BrokenField& phi);

// Residual of int G^side[Psi] Phi = -int Psi G^{-side}[Phi] (same boundary
// correction in natural mode).
double ibp_duality_residual(const BrokenField& Psi, const BrokenField& Phi, Side side);

// Smallest sampled Rayleigh quotient A(v,v)/|v|_dG^2 over random fields.
double coercivity_estimate(const MeshPtr& mesh, int degree, double sigma,
                           int n_samples, std::uint64_t seed);

// int_K f g for polynomial fields on the same mesh (exact quadrature).
double l2_inner_element(const BrokenField& f, const BrokenField& g, int elem);

} // namespace vcdg
