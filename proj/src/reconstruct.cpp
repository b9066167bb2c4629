#include "vcdg/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

namespace vcdg {

BrokenField antiderivative(const BrokenField& g) {
  const MeshPtr& mesh = g.mesh();
  BrokenField F(mesh, g.degree() + 1);
  double offset = 0.0;
  for (int i = 0; i < g.n_elements(); ++i) {
    const double h = mesh->width(i);
    Eigen::VectorXd a = plain_antiderivative(g.plain_coeffs(i)); // vanishes at xi=-1
    a *= 0.5 * h;                                                // dx = (h/2) dxi
    a[0] += offset;
    F.set_plain_coeffs(i, a);
    offset = plain_eval(a, 1.0);
  }
  return F;
}

void shift_mean(BrokenField& f, double target_mean) {
  const double c = target_mean - f.mean();
  for (int i = 0; i < f.n_elements(); ++i)
    f.coeff(i, 0) += c * std::sqrt(f.mesh()->width(i));
}

namespace {

// two-pass antidifferentiation of w'' = g with periodic or zero-Neumann
// closure and prescribed mean
BrokenField double_antiderivative(const BrokenField& g, double mean_value) {
  const double L = g.mesh()->length();
  const double gint = g.integral();
  const double scale = std::sqrt(g.l2_norm_sq() * L) + 1.0;
  if (std::abs(gint) > 1e-9 * scale)
    throw std::runtime_error("reconstruction: load has nonzero mean, not solvable");

  BrokenField S = antiderivative(g); // S(a) = 0, S(b) = int g ~ 0
  // periodic closure needs int w' = 0; Neumann closure needs w'(a) = 0,
  // already true. The mean shift below is exact for periodic and harmless
  // (roundoff-sized) for natural mode where S(a) = 0 pins the constant.
  if (g.mesh()->bc() == BcMode::periodic) shift_mean(S, 0.0);
  BrokenField w = antiderivative(S);
  shift_mean(w, mean_value);
  return w;
}

} // namespace

BrokenField elliptic_reconstruction(const BrokenField& u, const BrokenField& stress,
                                    const ModelParams& params) {
  const int p = u.degree();
  const int wdeg = params.well.polynomial ? (params.well.poly_degree - 1) * p : 3 * p;
  BrokenField load =
      compose(u, [&](double x) { return params.well.d(1, x); }, std::max(wdeg, p));
  load -= stress.embed(load.degree());
  load *= 1.0 / params.gamma;
  return double_antiderivative(load, u.mean());
}

BrokenField elliptic_reconstruction_smoothed(const BrokenField& u,
                                             const BrokenField& stress,
                                             const ModelParams& params,
                                             const ContinuousProjector& pc) {
  const int p = u.degree();
  if (pc.degree() != p + 1)
    throw std::invalid_argument("smoothed reconstruction: projector degree must be p+1");
  const int wdeg = params.well.polynomial ? (params.well.poly_degree - 1) * p : 3 * p;
  const BrokenField wp =
      compose(u, [&](double x) { return params.well.d(1, x); }, std::max(wdeg, p + 1));
  BrokenField load = pc.apply(wp).field;
  load -= discrete_reconstruction(stress, Side::plus);
  load *= 1.0 / params.gamma;
  // solvability: mean preservation of the projection plus the moment
  // conditions of D^+ make the load mean-zero up to roundoff
  const double defect = std::abs(load.integral());
  if (defect > 1e-9 * (1.0 + std::sqrt(load.l2_norm_sq())))
    throw std::runtime_error("smoothed reconstruction: load mean defect too large");
  return double_antiderivative(load, u.mean());
}

BrokenField velocity_reconstruction(const BrokenField& r1_cur, const BrokenField& r1_prev,
                                    double dt, const BrokenField& v) {
  BrokenField dr1 = (1.0 / dt) * (r1_cur - r1_prev);
  shift_mean(dr1, 0.0); // closure constant; the shift is mean-u drift sized
  BrokenField w = antiderivative(dr1);
  shift_mean(w, v.mean());
  return w;
}

double reconstruction_residual(const BrokenField& w, const BrokenField& rhs,
                               double gamma, int samples_per_elem) {
  const int ns = samples_per_elem > 0 ? samples_per_elem : 10 * (w.degree() + 1);
  const BrokenField w2 = w.derivative().derivative();
  double worst = 0.0;
  for (int i = 0; i < w.n_elements(); ++i) {
    const double x0 = w.mesh()->node(i), h = w.mesh()->width(i);
    for (int s = 0; s < ns; ++s) {
      const double x = x0 + h * (s + 0.5) / ns;
      worst = std::max(worst, std::abs(gamma * w2.eval_in_element(i, x) -
                                       rhs.eval_in_element(i, x)));
    }
  }
  return worst;
}

PairFns make_pair_fns(const BrokenField& u, const BrokenField& v) {
  const BrokenField du = u.derivative();
  const BrokenField dv = v.derivative();
  PairFns p;
  p.u = [u](double x) { return u.eval(x); };
  p.du = [du](double x) { return du.eval(x); };
  p.v = [v](double x) { return v.eval(x); };
  p.dv = [dv](double x) { return dv.eval(x); };
  return p;
}

PairFns make_pair_fns(const ExactSolution& exact) {
  PairFns p;
  p.u = [exact](double x) { return exact.u(x, 0.0); };
  p.du = [exact](double x) { return exact.dudx(x, 0.0); };
  p.v = [exact](double x) { return exact.v(x, 0.0); };
  p.dv = [](double) { return 0.0; };
  return p;
}

namespace {

template <typename F>
double quad_sum(const Mesh1D& mesh, int nq, F&& integrand) {
  const GaussRule& rule = gauss_rule(nq);
  double s = 0.0;
  for (int i = 0; i < mesh.n_elements(); ++i) {
    const double h = mesh.width(i);
    const double xm = 0.5 * (mesh.node(i) + mesh.node(i + 1));
    for (int q = 0; q < rule.nodes.size(); ++q)
      s += 0.5 * h * rule.weights[q] * integrand(xm + 0.5 * h * rule.nodes[q]);
  }
  return s;
}

} // namespace

EntropyPair relative_entropy_reduced(const PairFns& a, const PairFns& b,
                                     const Mesh1D& quad_mesh, const ModelParams& params,
                                     double history, int quad_points) {
  EntropyPair e;
  e.velocity_sq = 0.5 * quad_sum(quad_mesh, quad_points, [&](double x) {
    const double d = a.v(x) - b.v(x);
    return d * d;
  });
  e.gradient_sq = 0.5 * params.gamma * quad_sum(quad_mesh, quad_points, [&](double x) {
    const double d = a.du(x) - b.du(x);
    return d * d;
  });
  e.l2_sq = 0.5 * quad_sum(quad_mesh, quad_points, [&](double x) {
    const double d = a.u(x) - b.u(x);
    return d * d;
  });
  e.history = history;
  e.eta_R = e.velocity_sq + e.gradient_sq + e.history;
  e.eta_M = e.eta_R + e.l2_sq;
  return e;
}

EntropyPair relative_entropy_modified(const PairFns& a, const PairFns& b,
                                      const Mesh1D& quad_mesh, const ModelParams& params,
                                      double history, int quad_points) {
  return relative_entropy_reduced(a, b, quad_mesh, params, history, quad_points);
}

double h1_diff_sq(const PairFns& a, const PairFns& b, const Mesh1D& quad_mesh,
                  int quad_points) {
  return quad_sum(quad_mesh, quad_points, [&](double x) {
    const double d0 = a.v(x) - b.v(x);
    const double d1 = a.dv(x) - b.dv(x);
    return d0 * d0 + d1 * d1;
  });
}

} // namespace vcdg
