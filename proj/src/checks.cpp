#include "vcdg/checks.hpp"

#include <cmath>
#include <sstream>

#include "vcdg/driver.hpp"
#include "vcdg/estimator.hpp"

namespace vcdg {

MeshPtr random_mesh(std::mt19937_64& rng, bool allow_natural) {
  std::uniform_int_distribution<int> nels(4, 24);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = nels(rng);
  const bool periodic = !allow_natural || unit(rng) < 0.7;
  const BcMode bc = periodic ? BcMode::periodic : BcMode::natural;
  const double a = -1.0 + 2.0 * unit(rng);
  const double b = a + 0.5 + 2.0 * unit(rng);
  if (unit(rng) < 0.5) return build_mesh(a, b, n, bc);
  return build_mesh_perturbed(a, b, n, bc, rng(), 0.3);
}

BrokenField random_field(std::mt19937_64& rng, const MeshPtr& mesh, int degree) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  BrokenField f(mesh, degree);
  for (int i = 0; i < f.dofs(); ++i) f.coeffs()[i] = c(rng);
  return f;
}

double identity_suite_residual(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, 3);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    MeshPtr mesh = random_mesh(rng);
    const BrokenField psi = random_field(rng, mesh, deg(rng));
    const BrokenField phi = random_field(rng, mesh, deg(rng));
    const double scale =
        1.0 + dg_seminorm(psi) * std::sqrt(phi.l2_norm_sq()) +
        dg_seminorm(phi) * std::sqrt(psi.l2_norm_sq());
    worst = std::max(worst, elementwise_ibp_residual(psi, phi) / scale);
  }
  return worst;
}

double duality_suite_residual(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, 3);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    MeshPtr mesh = random_mesh(rng);
    const int p = deg(rng);
    const BrokenField Psi = random_field(rng, mesh, p);
    const BrokenField Phi = random_field(rng, mesh, p);
    const double scale = 1.0 + dg_seminorm(Psi) * std::sqrt(Phi.l2_norm_sq()) +
                         dg_seminorm(Phi) * std::sqrt(Psi.l2_norm_sq());
    worst = std::max(worst, ibp_duality_residual(Psi, Phi, Side::plus) / scale);
    worst = std::max(worst, ibp_duality_residual(Psi, Phi, Side::minus) / scale);
  }
  return worst;
}

ReconstructionDefects reconstruction_suite(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, 3);
  ReconstructionDefects d;
  for (int t = 0; t < trials; ++t) {
    MeshPtr mesh = random_mesh(rng);
    const int p = deg(rng);
    const BrokenField psi = random_field(rng, mesh, p);
    for (Side side : {Side::plus, Side::minus}) {
      const BrokenField D = discrete_reconstruction(psi, side);
      d.continuity = std::max(d.continuity, max_abs_jump(D));
      // nodal trace condition at the skeleton
      for (const Face& e : mesh->faces()) {
        const FaceTrace tp = face_trace(psi, e);
        const double want = side == Side::plus ? tp.minus : tp.plus;
        const double got = side == Side::plus ? D.trace(e.right, false)
                                              : D.trace(e.left, true);
        d.trace = std::max(d.trace, std::abs(got - want));
      }
      // moment orthogonality against degree p-1
      if (p >= 1) {
        const BrokenField diff = D - psi.embed(p + 1);
        for (int i = 0; i < mesh->n_elements(); ++i)
          for (int k = 0; k <= p - 1; ++k)
            d.orthogonality = std::max(d.orthogonality, std::abs(diff.coeff(i, k)));
      }
      // (D[psi])' must L2-project onto the lifted gradient
      const BrokenField lift = discrete_gradient(psi, side);
      const BrokenField dd = D.derivative().truncate(p) - lift;
      d.gradient = std::max(d.gradient, std::sqrt(dd.l2_norm_sq()));
    }
  }
  return d;
}

namespace {

CheckResult make(const std::string& name, bool pass, const std::string& detail) {
  return CheckResult{name, pass, detail};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

} // namespace

std::vector<CheckResult> run_selftests(std::uint64_t seed) {
  std::vector<CheckResult> out;

  { // quadrature exactness on monomials
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
      const GaussRule& rule = gauss_rule(n);
      for (int d = 0; d <= rule.exactness(); ++d) {
        double s = 0.0;
        for (int q = 0; q < rule.nodes.size(); ++q)
          s += rule.weights[q] * std::pow(rule.nodes[q], d);
        const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
        worst = std::max(worst, std::abs(s - exact));
      }
    }
    out.push_back(make("quadrature_exactness", worst <= 1e-13, fmt(worst)));
  }

  {
    const double r = identity_suite_residual(100, seed + 1);
    out.push_back(make("elementwise_integration_identities", r <= 1e-11, fmt(r)));
  }
  {
    const double r = duality_suite_residual(100, seed + 2);
    out.push_back(make("gradient_duality", r <= 1e-11, fmt(r)));
  }

  { // lifted gradient of a smooth function is the projected derivative
    std::mt19937_64 rng(seed + 3);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      MeshPtr mesh = random_mesh(rng, false);
      std::uniform_int_distribution<int> deg(0, 3);
      const int p = deg(rng);
      const double L = mesh->length();
      auto f = [&](double x) { return std::sin(2.0 * M_PI * (x - mesh->a()) / L); };
      auto df = [&](double x) {
        return 2.0 * M_PI / L * std::cos(2.0 * M_PI * (x - mesh->a()) / L);
      };
      const BrokenField fh = project_l2(f, mesh, p, 2 * p + 12);
      (void)fh;
      const BrokenField smooth = project_l2(f, mesh, 3, 18); // nearly continuous
      // exact check: continuous piecewise polynomial input
      const BrokenField cont = discrete_reconstruction(smooth, Side::plus);
      const BrokenField g = discrete_gradient(cont, Side::plus);
      const BrokenField ref = cont.derivative().truncate(cont.degree());
      const BrokenField diff = g - ref.embed(cont.degree());
      worst = std::max(worst, std::sqrt(diff.l2_norm_sq()) /
                                  (1.0 + std::sqrt(ref.l2_norm_sq())));
      (void)df;
    }
    out.push_back(make("gradient_of_continuous_is_derivative", worst <= 1e-11, fmt(worst)));
  }

  {
    const ReconstructionDefects d = reconstruction_suite(50, seed + 4);
    const bool pass = d.continuity <= 1e-10 && d.trace <= 1e-10 &&
                      d.orthogonality <= 1e-11 && d.gradient <= 1e-10;
    out.push_back(make("discrete_reconstruction_contract", pass,
                       "cont=" + fmt(d.continuity) + " trace=" + fmt(d.trace) +
                           " orth=" + fmt(d.orthogonality) + " grad=" + fmt(d.gradient)));
  }

  { // penalty form: symmetry and coercivity at the default penalty
    std::mt19937_64 rng(seed + 5);
    double asym = 0.0, coer = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 10; ++t) {
      MeshPtr mesh = random_mesh(rng);
      std::uniform_int_distribution<int> deg(0, 3);
      const int p = deg(rng);
      const double sigma = default_penalty(p);
      const Eigen::SparseMatrix<double> A = ip_form_matrix(mesh, p, sigma);
      const Eigen::SparseMatrix<double> At = A.transpose();
      double scale = 0.0;
      for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
          scale = std::max(scale, std::abs(it.value()));
      const Eigen::SparseMatrix<double> Diff = A - At;
      double dmax = 0.0;
      for (int k = 0; k < Diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(Diff, k); it; ++it)
          dmax = std::max(dmax, std::abs(it.value()));
      asym = std::max(asym, dmax / (1.0 + scale));
      coer = std::min(coer, coercivity_estimate(mesh, p, sigma, 100, rng()));
    }
    out.push_back(make("penalty_form_symmetry", asym <= 1e-12, fmt(asym)));
    out.push_back(make("penalty_form_coercivity", coer > 0.0, "min Rayleigh " + fmt(coer)));
  }

  { // projections: idempotency and mean preservation
    std::mt19937_64 rng(seed + 6);
    double worst = 0.0, mean_defect = 0.0;
    for (int t = 0; t < 10; ++t) {
      MeshPtr mesh = random_mesh(rng);
      std::uniform_int_distribution<int> deg(1, 3);
      const int p = deg(rng);
      const BrokenField f = random_field(rng, mesh, p);
      const BrokenField pf = project_l2([&](double x) { return f.eval(x); }, mesh, p,
                                        2 * p + 8);
      worst = std::max(worst, std::sqrt((pf - f).l2_norm_sq()));
      ContinuousProjector pc(mesh, p);
      const ContinuousField cf = pc.apply(f);
      const ContinuousField cf2 = pc.apply(cf.field);
      worst = std::max(worst, std::sqrt((cf2.field - cf.field).l2_norm_sq()));
      mean_defect = std::max(mean_defect, std::abs(cf.field.integral() - f.integral()));
    }
    const bool pass = worst <= 1e-10 && mean_defect <= 1e-11;
    out.push_back(make("projection_idempotency_and_means", pass,
                       "defect=" + fmt(worst) + " mean=" + fmt(mean_defect)));
  }

  { // energy density derivatives against central differences
    std::mt19937_64 rng(seed + 7);
    std::uniform_real_distribution<double> pts(-3.0, 3.0);
    const EnergyDensity w = double_well();
    double worst = 0.0;
    const double eps = 1e-6;
    for (int t = 0; t < 100; ++t) {
      const double u = pts(rng);
      for (int m = 1; m <= 3; ++m) {
        const double fd = (w.d(m - 1, u + eps) - w.d(m - 1, u - eps)) / (2.0 * eps);
        const double ex = w.d(m, u);
        worst = std::max(worst, std::abs(fd - ex) / (1.0 + std::abs(ex)));
      }
    }
    out.push_back(make("well_derivatives_vs_fd", worst <= 1e-6, fmt(worst)));
  }

  { // the standing profile solves W'(u) = gamma u''
    const double gamma = 1e-2;
    const ExactSolution e = exact_steady(gamma);
    const EnergyDensity w = double_well();
    const double k = std::sqrt(2.0 / gamma);
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -1.0 + 0.02 * i;
      const double u = e.u(x, 0);
      const double upp = -2.0 * k * k * u * (1.0 - u * u);
      worst = std::max(worst, std::abs(w.d(1, u) - gamma * upp));
    }
    out.push_back(make("steady_profile_residual", worst <= 1e-10, fmt(worst)));
  }

  { // stress elimination: integral identity and defining residual
    std::mt19937_64 rng(seed + 8);
    double worst_int = 0.0, worst_res = 0.0;
    for (int t = 0; t < 10; ++t) {
      MeshPtr mesh = random_mesh(rng);
      std::uniform_int_distribution<int> deg(1, 3);
      const int p = deg(rng);
      ModelParams params;
      params.bc = mesh->bc();
      params.domain_a = mesh->a();
      params.domain_b = mesh->b();
      Scheme scheme(mesh, p, params, default_penalty(p));
      const BrokenField u = random_field(rng, mesh, p);
      const BrokenField tau = scheme.eliminate_stress(u);
      const BrokenField wp = scheme.project_well_derivative(u);
      worst_int = std::max(worst_int, std::abs(tau.integral() - wp.integral()));
      const Eigen::VectorXd res = tau.coeffs() - wp.coeffs() -
                                  params.gamma * (scheme.ip_matrix() * u.coeffs());
      worst_res = std::max(worst_res, res.norm() / (1.0 + tau.coeffs().norm()));
    }
    const bool pass = worst_int <= 1e-10 && worst_res <= 1e-11;
    out.push_back(make("stress_elimination_identities", pass,
                       "int=" + fmt(worst_int) + " res=" + fmt(worst_res)));
  }

  { // guard rail: a deliberately tiny penalty must be rejected
    MeshPtr mesh = build_mesh(0.0, 1.0, 8, BcMode::periodic);
    bool threw = false;
    try {
      ritz_project([](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                   mesh, 2, 0.01);
    } catch (const std::exception&) {
      threw = true;
    }
    out.push_back(make("coercivity_guard_trips", threw,
                       threw ? "rejected sigma=0.01" : "accepted sigma=0.01"));
  }

  { // bitwise determinism of a small run
    RunConfig cfg;
    cfg.test = "test2";
    cfg.n = 8;
    cfg.p = 1;
    cfg.final_time = 0.02;
    cfg.snapshot_stride = 1;
    const RunOutput a = run_experiment(cfg);
    const RunOutput b = run_experiment(cfg);
    bool same = a.ok && b.ok &&
                a.traj.snapshots.size() == b.traj.snapshots.size() &&
                a.records.size() == b.records.size();
    if (same)
      for (std::size_t i = 0; i < a.traj.snapshots.size(); ++i)
        same = same &&
               a.traj.snapshots[i].u.coeffs() == b.traj.snapshots[i].u.coeffs() &&
               a.traj.snapshots[i].v.coeffs() == b.traj.snapshots[i].v.coeffs();
    if (same)
      for (std::size_t i = 0; i < a.records.size(); ++i)
        same = same && a.records[i].hR == b.records[i].hR;
    out.push_back(make("run_determinism", same, same ? "bit-identical" : "diverged"));
  }

  return out;
}

} // namespace vcdg
