#include "vcdg/space.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace vcdg {

double max_abs_jump(const BrokenField& f, int deriv) {
  double m = 0.0;
  for (const Face& e : f.mesh()->faces())
    m = std::max(m, std::abs(face_trace(f, e, deriv).jump()));
  return m;
}

namespace {

// plain Legendre coefficients of the continuous shape functions on [-1,1]
Eigen::VectorXd shape_plain(int degree, int which) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(degree + 1);
  if (which == 0) { // left hat (1-xi)/2
    a[0] = 0.5;
    a[1] = -0.5;
  } else if (which == 1) { // right hat (1+xi)/2
    a[0] = 0.5;
    a[1] = 0.5;
  } else { // bubble P_m - P_{m-2}, m = which
    a[which] = 1.0;
    a[which - 2] = -1.0;
  }
  return a;
}

} // namespace

ContinuousProjector::ContinuousProjector(MeshPtr mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ < 1)
    throw std::invalid_argument("ContinuousProjector: degree must be >= 1");
  const int n = mesh_->n_elements();
  const int m = degree_ + 1;
  const bool periodic = mesh_->bc() == BcMode::periodic;
  const int n_nodes = periodic ? n : n + 1;
  const int bubbles_per_elem = degree_ - 1;
  n_continuous_ = n_nodes + n * bubbles_per_elem;

  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    const double h = mesh_->width(i);
    auto add_shape = [&](int col, int which) {
      const Eigen::VectorXd a = shape_plain(degree_, which);
      for (int k = 0; k <= degree_; ++k)
        if (a[k] != 0.0)
          trip.emplace_back(i * m + k, col, a[k] * std::sqrt(h / (2.0 * k + 1.0)));
    };
    const int left_node = i;
    const int right_node = periodic ? (i + 1) % n : i + 1;
    add_shape(left_node, 0);
    add_shape(right_node, 1);
    for (int b = 2; b <= degree_; ++b)
      add_shape(n_nodes + i * bubbles_per_elem + (b - 2), b);
  }
  to_broken_.resize(n * m, n_continuous_);
  to_broken_.setFromTriplets(trip.begin(), trip.end());

  const Eigen::SparseMatrix<double> M =
      Eigen::SparseMatrix<double>(to_broken_.transpose()) * to_broken_;
  mass_.compute(M);
  if (mass_.info() != Eigen::Success)
    throw std::runtime_error("ContinuousProjector: singular mass system");
}

ContinuousField ContinuousProjector::apply(const BrokenField& f) const {
  const BrokenField g = f.degree() >= degree_ ? f.truncate(degree_) : f.embed(degree_);
  const Eigen::VectorXd rhs = to_broken_.transpose() * g.coeffs();
  const Eigen::VectorXd y = mass_.solve(rhs);
  last_residual_ = (to_broken_.transpose() * (to_broken_ * y) - rhs).norm() /
                   (1.0 + rhs.norm());
  if (!(last_residual_ <= 1e-12))
    throw std::runtime_error("ContinuousProjector: mass solve residual too large");
  ContinuousField out;
  out.field = BrokenField(mesh_, degree_);
  out.field.coeffs() = to_broken_ * y;
  out.continuity_defect = max_abs_jump(out.field);
  return out;
}

ContinuousField ContinuousProjector::apply(const ScalarFn& f) const {
  return apply(project_l2(f, mesh_, degree_));
}

BrokenField ritz_project(const ScalarFn& u0, const ScalarFn& du0, MeshPtr mesh,
                         int degree, double sigma) {
  const int n = mesh->n_elements();
  const int m = degree + 1;
  const int nd = n * m;

  if (coercivity_estimate(mesh, degree, sigma, 50, 0x5eedULL) <= 0.0)
    throw std::runtime_error("ritz_project: penalty too small, form not coercive");

  const Eigen::SparseMatrix<double> A = ip_form_matrix(mesh, degree, sigma);
  Eigen::VectorXd b = ip_form_smooth_rhs(du0, mesh, degree);

  // bordered system: append the mean-value constraint
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros()) + 2 * n);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < n; ++i) {
    const double w = std::sqrt(mesh->width(i));
    trip.emplace_back(nd, i * m, w);
    trip.emplace_back(i * m, nd, w);
  }
  Eigen::SparseMatrix<double> K(nd + 1, nd + 1);
  K.setFromTriplets(trip.begin(), trip.end());

  const GaussRule& rule = gauss_rule(std::max(2 * degree + 6, 16));
  double mean_target = 0.0;
  for (int i = 0; i < n; ++i) {
    const double h = mesh->width(i);
    const double xm = 0.5 * (mesh->node(i) + mesh->node(i + 1));
    for (int q = 0; q < rule.nodes.size(); ++q)
      mean_target += 0.5 * h * rule.weights[q] * u0(xm + 0.5 * h * rule.nodes[q]);
  }

  Eigen::VectorXd rhs(nd + 1);
  rhs.head(nd) = b;
  rhs[nd] = mean_target;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("ritz_project: singular constrained system");
  const Eigen::VectorXd sol = lu.solve(rhs);

  BrokenField out(mesh, degree);
  out.coeffs() = sol.head(nd);
  return out;
}

} // namespace vcdg
