#include "vcdg/field.hpp"

#include <cmath>
#include <stdexcept>

namespace vcdg {

BrokenField::BrokenField(MeshPtr mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ < 0) throw std::invalid_argument("BrokenField: degree must be >= 0");
  c_ = Eigen::VectorXd::Zero(dofs());
}

BrokenField BrokenField::constant(MeshPtr mesh, int degree, double value) {
  BrokenField f(std::move(mesh), degree);
  for (int i = 0; i < f.n_elements(); ++i)
    f.coeff(i, 0) = value * std::sqrt(f.mesh_->width(i));
  return f;
}

double plain_eval(const Eigen::VectorXd& a, double xi) {
  const int q = static_cast<int>(a.size()) - 1;
  std::vector<double> v(static_cast<std::size_t>(q) + 1);
  legendre_eval(q, xi, v.data());
  double s = 0.0;
  for (int k = 0; k <= q; ++k) s += a[k] * v[static_cast<std::size_t>(k)];
  return s;
}

Eigen::VectorXd plain_derivative(const Eigen::VectorXd& a) {
  const int q = static_cast<int>(a.size()) - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(std::max(q, 1));
  // P'_k = sum_{j<k, k-j odd} (2j+1) P_j
  for (int j = 0; j < q; ++j) {
    double s = 0.0;
    for (int k = j + 1; k <= q; k += 2) s += a[k];
    b[j] = (2 * j + 1) * s;
  }
  return b;
}

Eigen::VectorXd plain_antiderivative(const Eigen::VectorXd& a) {
  const int q = static_cast<int>(a.size()) - 1;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(q + 2);
  b[1] += a[0];
  for (int k = 1; k <= q; ++k) {
    b[k + 1] += a[k] / (2 * k + 1);
    b[k - 1] -= a[k] / (2 * k + 1);
  }
  double at_left = 0.0;
  for (int k = 0; k <= q + 1; ++k) at_left += b[k] * ((k % 2 == 0) ? 1.0 : -1.0);
  b[0] -= at_left;
  return b;
}

Eigen::VectorXd BrokenField::plain_coeffs(int elem) const {
  const double h = mesh_->width(elem);
  Eigen::VectorXd a(block());
  for (int k = 0; k <= degree_; ++k)
    a[k] = coeff(elem, k) * std::sqrt((2.0 * k + 1.0) / h);
  return a;
}

void BrokenField::set_plain_coeffs(int elem, const Eigen::VectorXd& a) {
  const double h = mesh_->width(elem);
  if (a.size() != block())
    throw std::invalid_argument("set_plain_coeffs: size mismatch");
  for (int k = 0; k <= degree_; ++k)
    coeff(elem, k) = a[k] / std::sqrt((2.0 * k + 1.0) / h);
}

double BrokenField::eval_in_element(int elem, double x, int deriv) const {
  const double h = mesh_->width(elem);
  const double xi = 2.0 * (x - mesh_->node(elem)) / h - 1.0;
  Eigen::VectorXd a = plain_coeffs(elem);
  for (int d = 0; d < deriv; ++d) a = plain_derivative(a);
  const double scale = std::pow(2.0 / h, deriv);
  return scale * plain_eval(a, xi);
}

double BrokenField::trace(int elem, bool right_end, int deriv) const {
  return eval_in_element(elem, right_end ? mesh_->node(elem + 1) : mesh_->node(elem),
                         deriv);
}

double BrokenField::eval(double x, Side side, int deriv) const {
  const auto& m = *mesh_;
  const bool periodic = m.bc() == BcMode::periodic;
  // wrap the identified endpoints before node detection
  if (periodic) {
    if (x == m.a() && side == Side::minus) return trace(m.n_elements() - 1, true, deriv);
    if (x == m.b() && side == Side::plus) return trace(0, false, deriv);
  }
  // node hit?
  const auto& nodes = m.nodes();
  auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
  if (it != nodes.end() && *it == x) {
    const int j = static_cast<int>(it - nodes.begin());
    if (side == Side::interior) {
      if (j > 0 && j < m.n_elements()) // interior node needs a side
        throw std::invalid_argument("BrokenField::eval: side required at a node");
      return trace(j == 0 ? 0 : m.n_elements() - 1, j != 0, deriv);
    }
    if (side == Side::minus) {
      if (j == 0) throw std::invalid_argument("BrokenField::eval: no minus side at left end");
      return trace(j - 1, true, deriv);
    }
    if (j == m.n_elements())
      throw std::invalid_argument("BrokenField::eval: no plus side at right end");
    return trace(j, false, deriv);
  }
  return eval_in_element(m.locate(x, side == Side::minus), x, deriv);
}

BrokenField BrokenField::derivative() const {
  const int q = std::max(degree_ - 1, 0);
  BrokenField d(mesh_, q);
  for (int i = 0; i < n_elements(); ++i) {
    Eigen::VectorXd a = plain_derivative(plain_coeffs(i));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(q + 1);
    for (int k = 0; k <= std::min<int>(q, static_cast<int>(a.size()) - 1); ++k)
      b[k] = a[k] * (2.0 / mesh_->width(i));
    d.set_plain_coeffs(i, b);
  }
  return d;
}

BrokenField BrokenField::embed(int q) const {
  if (q < degree_) throw std::invalid_argument("embed: target degree too small");
  BrokenField f(mesh_, q);
  for (int i = 0; i < n_elements(); ++i)
    for (int k = 0; k <= degree_; ++k) f.coeff(i, k) = coeff(i, k);
  return f;
}

BrokenField BrokenField::truncate(int q) const {
  if (q > degree_) return embed(q);
  BrokenField f(mesh_, q);
  for (int i = 0; i < n_elements(); ++i)
    for (int k = 0; k <= q; ++k) f.coeff(i, k) = coeff(i, k);
  return f;
}

double BrokenField::integral() const {
  double s = 0.0;
  for (int i = 0; i < n_elements(); ++i)
    s += coeff(i, 0) * std::sqrt(mesh_->width(i));
  return s;
}

double BrokenField::max_abs_sampled(int pts_per_elem, int deriv) const {
  double m = 0.0;
  for (int i = 0; i < n_elements(); ++i) {
    Eigen::VectorXd a = plain_coeffs(i);
    for (int d = 0; d < deriv; ++d) a = plain_derivative(a);
    const double scale = std::pow(2.0 / mesh_->width(i), deriv);
    for (int j = 0; j < pts_per_elem; ++j) {
      const double xi = -1.0 + 2.0 * j / (pts_per_elem - 1);
      m = std::max(m, std::abs(scale * plain_eval(a, xi)));
    }
  }
  return m;
}

namespace {
void check_compatible(const BrokenField& a, const BrokenField& b) {
  if (a.mesh().get() != b.mesh().get() || a.degree() != b.degree())
    throw std::invalid_argument("BrokenField: incompatible operands");
}
} // namespace

BrokenField& BrokenField::operator+=(const BrokenField& o) {
  check_compatible(*this, o);
  c_ += o.c_;
  return *this;
}

BrokenField& BrokenField::operator-=(const BrokenField& o) {
  check_compatible(*this, o);
  c_ -= o.c_;
  return *this;
}

BrokenField& BrokenField::operator*=(double s) {
  c_ *= s;
  return *this;
}

BrokenField project_l2(const ScalarFn& f, MeshPtr mesh, int degree, int quad_points) {
  const int nq = quad_points > 0 ? quad_points : 2 * degree + 4;
  const GaussRule& rule = gauss_rule(nq);
  BrokenField out(mesh, degree);
  std::vector<double> pk(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i < out.n_elements(); ++i) {
    const double h = mesh->width(i);
    const double xm = 0.5 * (mesh->node(i) + mesh->node(i + 1));
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double xi = rule.nodes[q];
      const double fx = f(xm + 0.5 * h * xi);
      legendre_eval(degree, xi, pk.data());
      for (int k = 0; k <= degree; ++k)
        out.coeff(i, k) += 0.5 * h * rule.weights[q] * fx *
                           std::sqrt((2.0 * k + 1.0) / h) * pk[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

BrokenField compose(const BrokenField& u, const ScalarFn& g, int result_degree) {
  // integrand g(u)*phi_k has degree <= result_degree*2 when g is polynomial
  // with deg(g)*deg(u) <= result_degree
  const int nq = result_degree + 1;
  const GaussRule& rule = gauss_rule(nq);
  MeshPtr mesh = u.mesh();
  BrokenField out(mesh, result_degree);
  std::vector<double> pk(static_cast<std::size_t>(result_degree) + 1);
  for (int i = 0; i < out.n_elements(); ++i) {
    const double h = mesh->width(i);
    const double xm = 0.5 * (mesh->node(i) + mesh->node(i + 1));
    const Eigen::VectorXd a = u.plain_coeffs(i);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double xi = rule.nodes[q];
      const double gu = g(plain_eval(a, xi));
      legendre_eval(result_degree, xi, pk.data());
      for (int k = 0; k <= result_degree; ++k)
        out.coeff(i, k) += 0.5 * h * rule.weights[q] * gu *
                           std::sqrt((2.0 * k + 1.0) / h) * pk[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

} // namespace vcdg
