#include "vcdg/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace vcdg {

Scheme::Scheme(MeshPtr mesh, int degree, ModelParams params, double sigma)
    : mesh_(std::move(mesh)), p_(degree), params_(std::move(params)), sigma_(sigma) {
  params_.validate();
  if (p_ < 0 || p_ > 3) throw std::invalid_argument("Scheme: degree must be in 0..3");
  nd_ = mesh_->n_elements() * (p_ + 1);
  A_ = ip_form_matrix(mesh_, p_, sigma_);
  // natural mode imposes the homogeneous velocity boundary value weakly
  Gm_ = gradient_matrix(mesh_, p_, Side::minus, true);
  Gp_ = gradient_matrix(mesh_, p_, Side::plus);
  GpA_ = (Gp_ * A_).pruned();
  GpGm_ = (Gp_ * Gm_).pruned();
}

BrokenField Scheme::project_well_derivative(const BrokenField& u, int order) const {
  BrokenField out(mesh_, p_);
  out.coeffs() = well_block_apply(u.coeffs(), order);
  return out;
}

Eigen::VectorXd Scheme::well_block_apply(const Eigen::VectorXd& u, int order) const {
  // elementwise quadrature projection of W^(order)(u) onto degree p
  const GaussRule& rule = gauss_rule(2 * p_ + 4);
  const int m = p_ + 1;
  const int nq = static_cast<int>(rule.nodes.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nd_);
  std::vector<double> pk(static_cast<std::size_t>(p_) + 1);
  for (int i = 0; i < mesh_->n_elements(); ++i) {
    const double h = mesh_->width(i);
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.nodes[q];
      legendre_eval(p_, xi, pk.data());
      double uval = 0.0;
      for (int k = 0; k < m; ++k)
        uval += u[i * m + k] * std::sqrt((2.0 * k + 1.0) / h) * pk[static_cast<std::size_t>(k)];
      const double w = params_.well.d(order, uval);
      for (int k = 0; k < m; ++k)
        out[i * m + k] += 0.5 * h * rule.weights[q] * w *
                          std::sqrt((2.0 * k + 1.0) / h) * pk[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

Eigen::VectorXd Scheme::stress_coeffs(const Eigen::VectorXd& u) const {
  return well_block_apply(u, 1) + params_.gamma * (A_ * u);
}

BrokenField Scheme::eliminate_stress(const BrokenField& u) const {
  BrokenField tau(mesh_, p_);
  tau.coeffs() = stress_coeffs(u.coeffs());
  return tau;
}

std::pair<BrokenField, BrokenField> Scheme::rhs(const BrokenField& u,
                                                const BrokenField& v) const {
  BrokenField du(mesh_, p_), dv(mesh_, p_);
  du.coeffs() = Gm_ * v.coeffs();
  dv.coeffs() = Gp_ * stress_coeffs(u.coeffs()) + params_.mu * (GpGm_ * v.coeffs());
  return {du, dv};
}

double Scheme::energy(const SolverState& s) const {
  const GaussRule& rule = gauss_rule_for_degree(4 * p_);
  double wint = 0.0;
  for (int i = 0; i < mesh_->n_elements(); ++i) {
    const double h = mesh_->width(i);
    const Eigen::VectorXd a = s.u.plain_coeffs(i);
    for (int q = 0; q < rule.nodes.size(); ++q)
      wint += 0.5 * h * rule.weights[q] * params_.well(plain_eval(a, rule.nodes[q]));
  }
  return 0.5 * params_.gamma * s.u.coeffs().dot(A_ * s.u.coeffs()) + wint +
         0.5 * s.v.l2_norm_sq();
}

double Scheme::dissipation_rate(const BrokenField& v) const {
  return params_.mu * (Gm_ * v.coeffs()).squaredNorm();
}

SolverState Scheme::initial_state(const InitialData& data) const {
  SolverState s;
  s.t = 0.0;
  s.u = ritz_project(data.u0, data.du0, mesh_, p_, sigma_);
  s.v = project_l2(data.v0, mesh_, p_);
  s.stress = eliminate_stress(s.u);
  return s;
}

void Scheme::assemble_jacobian(const Eigen::VectorXd& u, double dt,
                               Eigen::SparseMatrix<double>& J) const {
  const double c = 0.5 * dt;
  const int m = p_ + 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(2 * nd_) +
               static_cast<std::size_t>(Gm_.nonZeros() + GpA_.nonZeros() + GpGm_.nonZeros()) +
               static_cast<std::size_t>(Gp_.nonZeros()) * m);
  for (int i = 0; i < 2 * nd_; ++i) trip.emplace_back(i, i, 1.0);
  for (int k = 0; k < Gm_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(Gm_, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), nd_ + static_cast<int>(it.col()),
                        -c * it.value());
  for (int k = 0; k < GpA_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(GpA_, k); it; ++it)
      trip.emplace_back(nd_ + static_cast<int>(it.row()), static_cast<int>(it.col()),
                        -c * params_.gamma * it.value());
  for (int k = 0; k < GpGm_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(GpGm_, k); it; ++it)
      trip.emplace_back(nd_ + static_cast<int>(it.row()), nd_ + static_cast<int>(it.col()),
                        -c * params_.mu * it.value());

  // -c Gp * B(u), B = block diagonal of int W''(u) phi_j phi_k
  const GaussRule& rule = gauss_rule(2 * p_ + 4);
  const int nq = static_cast<int>(rule.nodes.size());
  std::vector<double> pk(static_cast<std::size_t>(p_) + 1);
  Eigen::MatrixXd B(m, m);
  for (int i = 0; i < mesh_->n_elements(); ++i) {
    const double h = mesh_->width(i);
    B.setZero();
    for (int q = 0; q < nq; ++q) {
      const double xi = rule.nodes[q];
      legendre_eval(p_, xi, pk.data());
      double uval = 0.0;
      std::vector<double> phi(static_cast<std::size_t>(m));
      for (int k = 0; k < m; ++k) {
        phi[static_cast<std::size_t>(k)] =
            std::sqrt((2.0 * k + 1.0) / h) * pk[static_cast<std::size_t>(k)];
        uval += u[i * m + k] * phi[static_cast<std::size_t>(k)];
      }
      const double w = 0.5 * h * rule.weights[q] * params_.well.d(2, uval);
      for (int r = 0; r < m; ++r)
        for (int cc = 0; cc < m; ++cc)
          B(r, cc) += w * phi[static_cast<std::size_t>(r)] * phi[static_cast<std::size_t>(cc)];
    }
    for (int k = 0; k < m; ++k) {
      const int col = i * m + k;
      for (Eigen::SparseMatrix<double>::InnerIterator it(Gp_, col); it; ++it)
        for (int cc = 0; cc < m; ++cc)
          trip.emplace_back(nd_ + static_cast<int>(it.row()), i * m + cc,
                            -c * it.value() * B(k, cc));
    }
  }
  J.resize(2 * nd_, 2 * nd_);
  J.setFromTriplets(trip.begin(), trip.end());
}

StepResult Scheme::step_cn(const SolverState& s, double dt, double tol, int max_iter,
                           bool damping) const {
  const Eigen::VectorXd un = s.u.coeffs(), vn = s.v.coeffs();
  const Eigen::VectorXd fu_n = Gm_ * vn;
  const Eigen::VectorXd fv_n =
      Gp_ * stress_coeffs(un) + params_.mu * (GpGm_ * vn);

  Eigen::VectorXd u = un, v = vn;
  const double scale = 1.0 + std::sqrt(un.squaredNorm() + vn.squaredNorm());

  auto residual = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& vv,
                      Eigen::VectorXd& ru, Eigen::VectorXd& rv) {
    ru = uu - un - 0.5 * dt * (fu_n + Gm_ * vv);
    rv = vv - vn -
         0.5 * dt * (fv_n + Gp_ * stress_coeffs(uu) + params_.mu * (GpGm_ * vv));
  };

  NewtonReport rep;
  Eigen::VectorXd ru, rv;
  residual(u, v, ru, rv);
  double rnorm = std::sqrt(ru.squaredNorm() + rv.squaredNorm());
  rep.history.push_back(rnorm);

  Eigen::SparseMatrix<double> J;
  for (int it = 0; it < max_iter && rnorm > tol * scale; ++it) {
    assemble_jacobian(u, dt, J);
    if (!symbolic_done_) {
      lu_.analyzePattern(J);
      symbolic_done_ = true;
    }
    lu_.factorize(J);
    if (lu_.info() != Eigen::Success) {
      lu_.compute(J); // pattern changed, redo the symbolic phase
      symbolic_done_ = true;
      if (lu_.info() != Eigen::Success) break;
    }
    Eigen::VectorXd r(2 * nd_);
    r.head(nd_) = ru;
    r.tail(nd_) = rv;
    const Eigen::VectorXd dx = lu_.solve(r);

    double step = 1.0;
    Eigen::VectorXd ut, vt;
    for (int bt = 0; bt < 30; ++bt) {
      ut = u - step * dx.head(nd_);
      vt = v - step * dx.tail(nd_);
      residual(ut, vt, ru, rv);
      const double rn = std::sqrt(ru.squaredNorm() + rv.squaredNorm());
      if (!damping || rn < rnorm || step < 1.0 / 1024.0) {
        u = ut;
        v = vt;
        rnorm = rn;
        break;
      }
      step *= 0.5;
    }
    rep.iterations = it + 1;
    rep.history.push_back(rnorm);
  }

  rep.residual = rnorm;
  rep.converged = rnorm <= tol * scale;

  StepResult out;
  out.newton = rep;
  out.state.t = s.t + dt;
  out.state.u = BrokenField(mesh_, p_);
  out.state.v = BrokenField(mesh_, p_);
  out.state.u.coeffs() = u;
  out.state.v.coeffs() = v;
  out.state.stress = eliminate_stress(out.state.u);
  return out;
}

Trajectory run(const Scheme& scheme, const InitialData& data, const SolveConfig& cfg,
               StepObserver* observer) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
  Trajectory traj;
  SolverState s = scheme.initial_state(data);

  const int n_steps = (cfg.T <= 0.0) ? 0 : static_cast<int>(std::llround(cfg.T / cfg.dt));
  std::vector<SolverState> window;
  window.push_back(s);
  traj.snapshots.push_back(s);
  traj.snapshot_energy.push_back(scheme.energy(s));
  if (observer) observer->on_step(window, 0);

  for (int n = 1; n <= n_steps; ++n) {
    StepResult r = scheme.step_cn(s, cfg.dt, cfg.newton_tol, cfg.newton_max, false);
    if (!r.newton.converged)
      r = scheme.step_cn(s, cfg.dt, cfg.newton_tol, cfg.newton_max, true);
    if (!r.newton.converged) {
      traj.failed = true;
      traj.failure = "newton stalled at t=" + std::to_string(s.t) +
                     " residual=" + std::to_string(r.newton.residual);
      break;
    }
    s = r.state;
    s.t = n * cfg.dt; // avoid accumulated roundoff in t

    window.push_back(s);
    if (window.size() > 3) window.erase(window.begin());

    traj.step_time.push_back(s.t);
    traj.step_energy.push_back(scheme.energy(s));
    traj.step_mean_u.push_back(s.u.mean());
    traj.step_newton_iters.push_back(r.newton.iterations);
    traj.step_newton_residual.push_back(r.newton.residual);
    traj.n_steps = n;

    if (observer) observer->on_step(window, n);
    if (n % cfg.snapshot_stride == 0 || n == n_steps) {
      traj.snapshots.push_back(s);
      traj.snapshot_energy.push_back(traj.step_energy.back());
    }
  }
  return traj;
}

TimeQuotients time_quotients(const std::vector<SolverState>& window, double dt,
                             const EnergyDensity& well) {
  if (window.size() < 2)
    throw std::invalid_argument("time_quotients: need at least two levels");
  const SolverState& cur = window.back();
  const SolverState& prev = window[window.size() - 2];
  const int p = cur.u.degree();
  const int wdeg = well.polynomial ? (well.poly_degree - 1) * p : 3 * p;
  auto wprime = [&](const SolverState& s) {
    return compose(s.u, [&](double x) { return well.d(1, x); }, wdeg);
  };

  TimeQuotients q;
  const double idt = 1.0 / dt;
  q.du = idt * (cur.u - prev.u);
  q.dv = idt * (cur.v - prev.v);
  q.dstress = idt * (cur.stress - prev.stress);
  const BrokenField w_cur = wprime(cur), w_prev = wprime(prev);
  q.dwprime = idt * (w_cur - w_prev);

  if (window.size() >= 3) {
    const SolverState& old = window[window.size() - 3];
    const double idt2 = idt * idt;
    q.d2u = idt2 * ((cur.u - prev.u) - (prev.u - old.u));
    q.d2stress = idt2 * ((cur.stress - prev.stress) - (prev.stress - old.stress));
    const BrokenField w_old = wprime(old);
    q.d2wprime = idt2 * ((w_cur - w_prev) - (w_prev - w_old));
    q.second_available = true;
  }
  return q;
}

} // namespace vcdg
