#include "vcdg/operators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace vcdg {

namespace {

// one-sided basis data of an element at a face
struct ElemTraceBasis {
  Eigen::VectorXd value; // phi_k at the endpoint
  Eigen::VectorXd dvalue;
};

ElemTraceBasis trace_basis(const Mesh1D& mesh, int degree, int elem, bool right_end) {
  const double h = mesh.width(elem);
  ElemTraceBasis t;
  t.value.resize(degree + 1);
  t.dvalue.resize(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    const double s = std::sqrt((2.0 * k + 1.0) / h);
    const double sgn = right_end ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0);
    const double dsgn = right_end ? 1.0 : ((k % 2 == 1) ? 1.0 : -1.0);
    t.value[k] = s * sgn;
    t.dvalue[k] = s * dsgn * (2.0 / h) * 0.5 * k * (k + 1);
  }
  return t;
}

// derivative matrix in the orthonormal basis (maps degree<=p to degree<=p)
Eigen::MatrixXd derivative_matrix(double h, int degree) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  for (int j = 0; j <= degree; ++j)
    for (int k = j + 1; k <= degree; k += 2)
      D(j, k) = (2.0 / h) * std::sqrt((2.0 * j + 1.0) * (2.0 * k + 1.0));
  return D;
}

double plain_l2_norm_sq(const Eigen::VectorXd& a, double h) {
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a[k] * a[k] / (2.0 * k + 1.0);
  return h * s;
}

} // namespace

FaceTrace face_trace(const BrokenField& f, const Face& e, int deriv) {
  FaceTrace t;
  t.minus = f.trace(e.left, true, deriv);
  t.plus = f.trace(e.right, false, deriv);
  return t;
}

std::vector<FaceTrace> traces(const BrokenField& f, int deriv) {
  std::vector<FaceTrace> out;
  out.reserve(f.mesh()->faces().size());
  for (const Face& e : f.mesh()->faces()) out.push_back(face_trace(f, e, deriv));
  return out;
}

double jump_norm_sq(const BrokenField& f, FaceWeight w, int deriv) {
  double s = 0.0;
  for (const Face& e : f.mesh()->faces()) {
    const double j = face_trace(f, e, deriv).jump();
    double weight = 1.0;
    switch (w) {
      case FaceWeight::one: weight = 1.0; break;
      case FaceWeight::inv_h_mean: weight = 1.0 / e.h_mean; break;
      case FaceWeight::h_mean: weight = e.h_mean; break;
      case FaceWeight::h_left: weight = e.h_left; break;
      case FaceWeight::h_right: weight = e.h_right; break;
    }
    s += weight * j * j;
  }
  return s;
}

BrokenField discrete_gradient(const BrokenField& psi, Side side) {
  if (side == Side::interior)
    throw std::invalid_argument("discrete_gradient: side must be plus or minus");
  const MeshPtr& mesh = psi.mesh();
  const int p = psi.degree();
  BrokenField g = psi.derivative().embed(p);
  for (const Face& e : mesh->faces()) {
    const double jump = face_trace(psi, e).jump();
    const int elem = (side == Side::plus) ? e.right : e.left;
    const ElemTraceBasis tb = trace_basis(*mesh, p, elem, side == Side::minus);
    for (int k = 0; k <= p; ++k) g.coeff(elem, k) -= jump * tb.value[k];
  }
  return g;
}

Eigen::SparseMatrix<double> gradient_matrix(const MeshPtr& mesh, int degree, Side side,
                                            bool zero_bc_lift) {
  const int n = mesh->n_elements();
  const int m = degree + 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * m * (m + 4));
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd D = derivative_matrix(mesh->width(i), degree);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        if (D(r, c) != 0.0) trip.emplace_back(i * m + r, i * m + c, D(r, c));
  }
  for (const Face& e : mesh->faces()) {
    const ElemTraceBasis tl = trace_basis(*mesh, degree, e.left, true);
    const ElemTraceBasis tr = trace_basis(*mesh, degree, e.right, false);
    const int row_elem = (side == Side::plus) ? e.right : e.left;
    const Eigen::VectorXd& rowv = (side == Side::plus) ? tr.value : tl.value;
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        // -[[psi]] Phi^side, [[psi]] = psi_L - psi_R at the face
        trip.emplace_back(row_elem * m + r, e.left * m + c, -rowv[r] * tl.value[c]);
        trip.emplace_back(row_elem * m + r, e.right * m + c, rowv[r] * tr.value[c]);
      }
    }
  }
  if (zero_bc_lift && mesh->bc() == BcMode::natural) {
    // ghost value 0 outside: subtract the lift of psi * n with interior traces
    const ElemTraceBasis t0 = trace_basis(*mesh, degree, 0, false);
    const ElemTraceBasis tn = trace_basis(*mesh, degree, n - 1, true);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        trip.emplace_back(r, c, t0.value[r] * t0.value[c]);
        trip.emplace_back((n - 1) * m + r, (n - 1) * m + c, -tn.value[r] * tn.value[c]);
      }
    }
  }
  Eigen::SparseMatrix<double> G(n * m, n * m);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

BrokenField discrete_reconstruction(const BrokenField& psi, Side side) {
  if (side == Side::interior)
    throw std::invalid_argument("discrete_reconstruction: side must be plus or minus");
  const MeshPtr& mesh = psi.mesh();
  const int p = psi.degree();
  const int n = mesh->n_elements();
  BrokenField out(mesh, p + 1);

  // prescribed nodal values: the -side trace of psi for D^+, +side for D^-
  std::vector<double> node_value(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    int elem;
    bool right_end;
    if (side == Side::plus) { // psi^- : element left of node j
      elem = (j > 0) ? j - 1 : (mesh->bc() == BcMode::periodic ? n - 1 : 0);
      right_end = (j > 0) || mesh->bc() == BcMode::periodic;
      if (j == 0 && mesh->bc() == BcMode::natural) right_end = false; // own trace
    } else { // psi^+ : element right of node j
      elem = (j < n) ? j : (mesh->bc() == BcMode::periodic ? 0 : n - 1);
      right_end = false;
      if (j == n && mesh->bc() == BcMode::natural) right_end = true; // own trace
    }
    node_value[static_cast<std::size_t>(j)] = psi.trace(elem, right_end);
  }

  for (int i = 0; i < n; ++i) {
    const double h = mesh->width(i);
    // moment matching: orthonormal coefficients up to p-1 carry over
    for (int k = 0; k <= p - 1; ++k) out.coeff(i, k) = psi.coeff(i, k);
    auto s = [h](int k) { return std::sqrt((2.0 * k + 1.0) / h); };
    auto val_at = [&](int k, bool right) {
      return s(k) * (right ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0));
    };
    double rl = node_value[static_cast<std::size_t>(i)];
    double rr = node_value[static_cast<std::size_t>(i) + 1];
    for (int k = 0; k <= p - 1; ++k) {
      rl -= out.coeff(i, k) * val_at(k, false);
      rr -= out.coeff(i, k) * val_at(k, true);
    }
    const double a11 = val_at(p, false), a12 = val_at(p + 1, false);
    const double a21 = val_at(p, true), a22 = val_at(p + 1, true);
    const double det = a11 * a22 - a12 * a21;
    out.coeff(i, p) = (rl * a22 - a12 * rr) / det;
    out.coeff(i, p + 1) = (a11 * rr - rl * a21) / det;
  }
  return out;
}

BrokenField nodal_projection(const BrokenField& w, int degree) {
  if (degree < 1)
    throw std::invalid_argument("nodal_projection: degree must be >= 1");
  const MeshPtr& mesh = w.mesh();
  BrokenField out(mesh, degree);
  const int keep = std::min(degree - 1, w.degree() + 1); // coefficients 0..degree-2
  for (int i = 0; i < w.n_elements(); ++i) {
    const double h = mesh->width(i);
    for (int k = 0; k < keep; ++k) out.coeff(i, k) = w.coeff(i, k);
    auto s = [h](int k) { return std::sqrt((2.0 * k + 1.0) / h); };
    auto val = [&](int k, bool right) {
      return s(k) * (right ? 1.0 : ((k % 2 == 0) ? 1.0 : -1.0));
    };
    double rl = w.trace(i, false), rr = w.trace(i, true);
    for (int k = 0; k < keep; ++k) {
      rl -= out.coeff(i, k) * val(k, false);
      rr -= out.coeff(i, k) * val(k, true);
    }
    const double a11 = val(degree - 1, false), a12 = val(degree, false);
    const double a21 = val(degree - 1, true), a22 = val(degree, true);
    const double det = a11 * a22 - a12 * a21;
    out.coeff(i, degree - 1) = (rl * a22 - a12 * rr) / det;
    out.coeff(i, degree) = (a11 * rr - rl * a21) / det;
  }
  return out;
}

Eigen::SparseMatrix<double> ip_form_matrix(const MeshPtr& mesh, int degree, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("ip_form: sigma must be positive");
  const int n = mesh->n_elements();
  const int m = degree + 1;
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd D = derivative_matrix(mesh->width(i), degree);
    const Eigen::MatrixXd S = D.transpose() * D;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        if (S(r, c) != 0.0) trip.emplace_back(i * m + r, i * m + c, S(r, c));
  }
  for (const Face& e : mesh->faces()) {
    const ElemTraceBasis tl = trace_basis(*mesh, degree, e.left, true);
    const ElemTraceBasis tr = trace_basis(*mesh, degree, e.right, false);
    const double pen = sigma / e.h_mean;
    const int idx[2] = {e.left, e.right};
    const Eigen::VectorXd* jv[2] = {&tl.value, &tr.value};
    const double jsgn[2] = {1.0, -1.0};
    const Eigen::VectorXd* av[2] = {&tl.dvalue, &tr.dvalue};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int r = 0; r < m; ++r) {
          for (int c = 0; c < m; ++c) {
            double v = 0.0;
            // -{z'} [[u]]  (row = z = a, col = u = b)
            v -= 0.5 * (*av[a])[r] * jsgn[b] * (*jv[b])[c];
            // -[[z]] {u'}
            v -= jsgn[a] * (*jv[a])[r] * 0.5 * (*av[b])[c];
            // penalty
            v += pen * jsgn[a] * (*jv[a])[r] * jsgn[b] * (*jv[b])[c];
            if (v != 0.0) trip.emplace_back(idx[a] * m + r, idx[b] * m + c, v);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> A(n * m, n * m);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

double ip_form(const BrokenField& u, const BrokenField& z, double sigma) {
  if (u.mesh().get() != z.mesh().get())
    throw std::invalid_argument("ip_form: fields on different meshes");
  const int p = std::max(u.degree(), z.degree());
  const BrokenField ue = u.embed(p), ze = z.embed(p);
  const Eigen::SparseMatrix<double> A = ip_form_matrix(u.mesh(), p, sigma);
  return ze.coeffs().dot(A * ue.coeffs());
}

Eigen::VectorXd ip_form_smooth_rhs(const ScalarFn& du0, const MeshPtr& mesh,
                                   int degree, int quad_points) {
  const int n = mesh->n_elements();
  const int m = degree + 1;
  const int nq = quad_points > 0 ? quad_points : 2 * degree + 6;
  const GaussRule& rule = gauss_rule(nq);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n * m);
  std::vector<double> pk(static_cast<std::size_t>(degree) + 1);
  std::vector<double> dpk(static_cast<std::size_t>(degree) + 1);
  for (int i = 0; i < n; ++i) {
    const double h = mesh->width(i);
    const double xm = 0.5 * (mesh->node(i) + mesh->node(i + 1));
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double xi = rule.nodes[q];
      const double d = du0(xm + 0.5 * h * xi);
      legendre_eval(degree, xi, pk.data(), dpk.data());
      for (int k = 0; k <= degree; ++k)
        b[i * m + k] += 0.5 * h * rule.weights[q] * d *
                        std::sqrt((2.0 * k + 1.0) / h) * dpk[static_cast<std::size_t>(k)] *
                        (2.0 / h);
    }
  }
  // -int_E [[Phi]] {u0'} ; u0 smooth so {u0'} is the pointwise derivative
  for (const Face& e : mesh->faces()) {
    const double d = du0(e.x);
    const ElemTraceBasis tl = trace_basis(*mesh, degree, e.left, true);
    const ElemTraceBasis tr = trace_basis(*mesh, degree, e.right, false);
    for (int k = 0; k <= degree; ++k) {
      b[e.left * m + k] -= tl.value[k] * d;
      b[e.right * m + k] += tr.value[k] * d;
    }
  }
  return b;
}

double default_penalty(int degree) { return 10.0 * (degree + 1) * (degree + 1); }

double dg_seminorm_sq(const BrokenField& u) {
  const BrokenField du = u.derivative();
  return du.l2_norm_sq() + jump_norm_sq(u, FaceWeight::inv_h_mean);
}

double dg_seminorm(const BrokenField& u) { return std::sqrt(dg_seminorm_sq(u)); }

double sobolev_seminorm_sq_element(const BrokenField& f, int k, int elem) {
  Eigen::VectorXd a = f.plain_coeffs(elem);
  const double h = f.mesh()->width(elem);
  for (int d = 0; d < k; ++d) a = plain_derivative(a);
  const double scale = std::pow(2.0 / h, k);
  return scale * scale * plain_l2_norm_sq(a, h);
}

double l2_inner_element(const BrokenField& f, const BrokenField& g, int elem) {
  const Eigen::VectorXd af = f.plain_coeffs(elem);
  const Eigen::VectorXd ag = g.plain_coeffs(elem);
  const int nmin = static_cast<int>(std::min(af.size(), ag.size()));
  double s = 0.0;
  for (int k = 0; k < nmin; ++k) s += af[k] * ag[k] / (2.0 * k + 1.0);
  return f.mesh()->width(elem) * s;
}

namespace {

// sum over element boundaries of psi*phi*n using one-sided traces
double boundary_sum(const BrokenField& psi, const BrokenField& phi) {
  double s = 0.0;
  for (int i = 0; i < psi.n_elements(); ++i) {
    s += psi.trace(i, true) * phi.trace(i, true);
    s -= psi.trace(i, false) * phi.trace(i, false);
  }
  return s;
}

double natural_boundary_term(const BrokenField& psi, const BrokenField& phi) {
  if (psi.mesh()->bc() == BcMode::periodic) return 0.0;
  const int n = psi.n_elements();
  return psi.trace(n - 1, true) * phi.trace(n - 1, true) -
         psi.trace(0, false) * phi.trace(0, false);
}

} // namespace

double elementwise_ibp_residual(const BrokenField& psi, const BrokenField& phi) {
  const BrokenField dpsi = psi.derivative();
  const BrokenField dphi = phi.derivative();
  double lhs = 0.0, rhs_vol = 0.0;
  for (int i = 0; i < psi.n_elements(); ++i) {
    lhs += l2_inner_element(dpsi, phi, i);
    rhs_vol -= l2_inner_element(psi, dphi, i);
  }
  const double bsum = boundary_sum(psi, phi);
  const double r1 = std::abs(lhs - (rhs_vol + bsum));

  double skel = 0.0, skel_prod = 0.0;
  for (const Face& e : psi.mesh()->faces()) {
    const FaceTrace tp = face_trace(psi, e);
    const FaceTrace tf = face_trace(phi, e);
    skel += tp.jump() * tf.avg() + tf.jump() * tp.avg();
    skel_prod += tp.minus * tf.minus - tp.plus * tf.plus;
  }
  const double corr = natural_boundary_term(psi, phi);
  const double r2 = std::abs(bsum - (skel + corr));
  const double r3 = std::abs(bsum - (skel_prod + corr));
  return std::max({r1, r2, r3});
}

double ibp_duality_residual(const BrokenField& Psi, const BrokenField& Phi, Side side) {
  const BrokenField g1 = discrete_gradient(Psi, side);
  const BrokenField g2 = discrete_gradient(Phi, side == Side::plus ? Side::minus : Side::plus);
  double s = 0.0;
  for (int i = 0; i < Psi.n_elements(); ++i) {
    s += l2_inner_element(g1, Phi, i);
    s += l2_inner_element(Psi, g2, i);
  }
  return std::abs(s - natural_boundary_term(Psi, Phi));
}

double coercivity_estimate(const MeshPtr& mesh, int degree, double sigma,
                           int n_samples, std::uint64_t seed) {
  const Eigen::SparseMatrix<double> A = ip_form_matrix(mesh, degree, sigma);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    BrokenField v(mesh, degree);
    for (int i = 0; i < v.dofs(); ++i) v.coeffs()[i] = dist(rng);
    const double denom = dg_seminorm_sq(v);
    if (denom < 1e-14) continue;
    worst = std::min(worst, v.coeffs().dot(A * v.coeffs()) / denom);
  }
  return worst;
}

} // namespace vcdg
