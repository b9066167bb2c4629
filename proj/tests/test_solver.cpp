#include <doctest.h>

#include "vcdg/checks.hpp"
#include "vcdg/solver.hpp"

#include <cmath>

using namespace vcdg;

namespace {

ModelParams test1_params() {
  ModelParams p;
  p.gamma = 1e-2;
  p.mu = 1e-2;
  p.bc = BcMode::natural;
  p.domain_a = -1.0;
  p.domain_b = 1.0;
  return p;
}

// quadratic-energy surrogate: W'(u) = u makes the scheme linear
EnergyDensity linear_well() {
  EnergyDensity w;
  w.name = "quadratic";
  w.max_order = 99;
  w.polynomial = true;
  w.poly_degree = 2;
  w.deriv = [](int m, double u) -> double {
    switch (m) {
      case 0: return 0.5 * u * u;
      case 1: return u;
      case 2: return 1.0;
      default: return 0.0;
    }
  };
  return w;
}

} // namespace

TEST_CASE("stress elimination") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 6, BcMode::periodic);
  ModelParams params;
  params.bc = BcMode::periodic;
  Scheme scheme(mesh, 2, params, default_penalty(2));

  // constant state: the form vanishes and the stress is W'(c)
  const BrokenField c = BrokenField::constant(mesh, 2, 0.4);
  const BrokenField tau = scheme.eliminate_stress(c);
  const double wc = params.well.d(1, 0.4);
  for (double x : {0.21, 0.55, 0.83})
    CHECK(tau.eval(x) == doctest::Approx(wc).epsilon(1e-12));

  // integral identity int stress = int W'(u) for arbitrary states
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const BrokenField u = random_field(rng, mesh, 2);
    const BrokenField s = scheme.eliminate_stress(u);
    const BrokenField wp = scheme.project_well_derivative(u);
    CHECK(std::abs(s.integral() - wp.integral()) <= 1e-11);
    // residual of the defining relation
    const Eigen::VectorXd res =
        s.coeffs() - wp.coeffs() - params.gamma * (scheme.ip_matrix() * u.coeffs());
    CHECK(res.norm() <= 1e-11 * (1.0 + s.coeffs().norm()));
  }
}

TEST_CASE("stress of the projected standing interface decreases under refinement") {
  const ModelParams params = test1_params();
  const ExactSolution e = exact_steady(params.gamma);
  auto u0 = [&](double x) { return e.u(x, 0.0); };
  auto du0 = [&](double x) { return e.dudx(x, 0.0); };
  double prev = -1.0;
  for (int N : {32, 64, 128}) {
    MeshPtr mesh = build_mesh(-1.0, 1.0, N, BcMode::natural);
    Scheme scheme(mesh, 2, params, default_penalty(2));
    const BrokenField uh = ritz_project(u0, du0, mesh, 2, default_penalty(2));
    const double norm = std::sqrt(scheme.eliminate_stress(uh).l2_norm_sq());
    if (prev >= 0.0) CHECK(norm < 0.5 * prev);
    prev = norm;
  }
}

TEST_CASE("semidiscrete right-hand side") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 8, BcMode::periodic);
  ModelParams params;
  params.bc = BcMode::periodic;
  params.mu = 0.3;
  Scheme scheme(mesh, 2, params, default_penalty(2));

  // stationary constant state
  const BrokenField c = BrokenField::constant(mesh, 2, 1.0);
  const BrokenField z = BrokenField::constant(mesh, 2, 0.0);
  auto [du0, dv0] = scheme.rhs(c, z);
  CHECK(std::sqrt(du0.l2_norm_sq()) <= 1e-12);
  CHECK(std::sqrt(dv0.l2_norm_sq()) <= 1e-12);

  // with v = 0 the strain is frozen and dv/dt lifts the stress
  std::mt19937_64 rng(7);
  const BrokenField u = random_field(rng, mesh, 2);
  auto [du1, dv1] = scheme.rhs(u, z);
  CHECK(std::sqrt(du1.l2_norm_sq()) <= 1e-12);
  const BrokenField lift = discrete_gradient(scheme.eliminate_stress(u), Side::plus);
  CHECK(std::sqrt((dv1 - lift).l2_norm_sq()) <=
        1e-12 * (1.0 + std::sqrt(lift.l2_norm_sq())));
}

TEST_CASE("two routes to the viscous term agree") {
  // mass-form dualization versus the derivative of the reconstruction
  std::mt19937_64 rng(13);
  for (BcMode bc : {BcMode::periodic, BcMode::natural}) {
    MeshPtr mesh = build_mesh_perturbed(0.0, 1.0, 10, bc, 17, 0.25);
    ModelParams params;
    params.bc = bc;
    params.mu = 1.0;
    const int p = 2;
    Scheme scheme(mesh, p, params, default_penalty(p));
    const BrokenField v = random_field(rng, mesh, p);
    BrokenField w(mesh, p);
    w.coeffs() = scheme.grad_minus() * v.coeffs(); // du/dt
    BrokenField route_a(mesh, p);
    route_a.coeffs() = scheme.grad_plus() * w.coeffs();
    const BrokenField route_b =
        discrete_reconstruction(w, Side::plus).derivative().truncate(p);
    CHECK(std::sqrt((route_a - route_b).l2_norm_sq()) <=
          1e-11 * (1.0 + std::sqrt(route_a.l2_norm_sq())));
  }
}

TEST_CASE("constant states are fixed points of the time step") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 8, BcMode::periodic);
  ModelParams params;
  params.bc = BcMode::periodic;
  Scheme scheme(mesh, 1, params, default_penalty(1));
  SolverState s;
  s.t = 0.0;
  s.u = BrokenField::constant(mesh, 1, 0.7);
  s.v = BrokenField::constant(mesh, 1, 0.0);
  s.stress = scheme.eliminate_stress(s.u);
  const StepResult r = scheme.step_cn(s, 1e-3, 1e-12, 30);
  CHECK(r.newton.converged);
  CHECK(std::sqrt((r.state.u - s.u).l2_norm_sq()) <= 1e-12);
  CHECK(std::sqrt((r.state.v - s.v).l2_norm_sq()) <= 1e-12);
}

TEST_CASE("a quadratic well needs a single Newton step") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 8, BcMode::periodic);
  ModelParams params;
  params.bc = BcMode::periodic;
  params.well = linear_well();
  Scheme scheme(mesh, 1, params, default_penalty(1));
  std::mt19937_64 rng(23);
  SolverState s;
  s.t = 0.0;
  s.u = random_field(rng, mesh, 1);
  s.v = random_field(rng, mesh, 1);
  s.stress = scheme.eliminate_stress(s.u);
  const StepResult r = scheme.step_cn(s, 1e-3, 1e-10, 30);
  CHECK(r.newton.converged);
  CHECK(r.newton.iterations <= 2);
}

TEST_CASE("one step near the standing interface does not raise the energy") {
  const ModelParams params = test1_params();
  MeshPtr mesh = build_mesh(-1.0, 1.0, 32, BcMode::natural);
  Scheme scheme(mesh, 1, params, default_penalty(1));
  const SolverState s0 = scheme.initial_state(
      initial_data(TestCase::test1, Test3Variant::c1, params.gamma));
  const double dt = 1.0 / (32.0 * 32.0);
  const StepResult r = scheme.step_cn(s0, dt, 1e-10, 30);
  REQUIRE(r.newton.converged);
  CHECK(scheme.energy(r.state) <= scheme.energy(s0) + 1e-10);
}

TEST_CASE("run: degenerate horizon, conservation, dissipation") {
  const ModelParams params = test1_params();
  MeshPtr mesh = build_mesh(-1.0, 1.0, 32, BcMode::natural);
  Scheme scheme(mesh, 1, params, default_penalty(1));
  const InitialData data = initial_data(TestCase::test1, Test3Variant::c1, params.gamma);

  SolveConfig cfg;
  cfg.dt = 1.0 / 1024.0;
  cfg.T = 0.0;
  const Trajectory t0 = run(scheme, data, cfg);
  CHECK(t0.snapshots.size() == 1);
  CHECK(t0.n_steps == 0);

  cfg.T = 0.05;
  const Trajectory tr = run(scheme, data, cfg);
  REQUIRE(!tr.failed);
  const double mean0 = tr.snapshots.front().u.mean();
  for (double m : tr.step_mean_u) CHECK(std::abs(m - mean0) <= 1e-11);
  for (std::size_t i = 0; i + 1 < tr.step_energy.size(); ++i)
    CHECK(tr.step_energy[i + 1] <= tr.step_energy[i] + 1e-10);
  // times strictly increasing
  for (std::size_t i = 0; i + 1 < tr.step_time.size(); ++i)
    CHECK(tr.step_time[i] < tr.step_time[i + 1]);
}

namespace {

// energetic, mesh-resolved datum for the temporal-order checks
InitialData sine_datum() {
  InitialData d;
  d.u0 = [](double x) { return 0.8 * std::sin(2.0 * M_PI * x); };
  d.du0 = [](double x) { return 0.8 * 2.0 * M_PI * std::cos(2.0 * M_PI * x); };
  d.v0 = [](double) { return 0.0; };
  return d;
}

} // namespace

TEST_CASE("inviscid runs conserve the energy to second order in dt") {
  ModelParams params;
  params.gamma = 1e-2;
  params.mu = 0.0;
  params.bc = BcMode::periodic;
  MeshPtr mesh = build_mesh(0.0, 1.0, 16, BcMode::periodic);
  Scheme scheme(mesh, 2, params, default_penalty(2));
  const InitialData data = sine_datum();

  auto max_drift = [&](double dt) {
    SolveConfig cfg;
    cfg.dt = dt;
    cfg.T = 0.25;
    const Trajectory tr = run(scheme, data, cfg);
    REQUIRE(!tr.failed);
    const double E0 = scheme.energy(scheme.initial_state(data));
    double worst = 0.0;
    for (double e : tr.step_energy) worst = std::max(worst, std::abs(e - E0));
    return worst;
  };
  const double d1 = max_drift(1.0 / 128.0);
  const double d2 = max_drift(1.0 / 256.0);
  // consistent with a single constant C in C dt^2 t, with 50% headroom
  CHECK(d2 <= d1);
  CHECK(d2 <= 1.5 * d1 / 4.0);
}

TEST_CASE("halving dt quarters the self-convergence error") {
  ModelParams params;
  params.gamma = 1e-2;
  params.mu = 1e-1;
  params.bc = BcMode::periodic;
  MeshPtr mesh = build_mesh(0.0, 1.0, 16, BcMode::periodic);
  Scheme scheme(mesh, 2, params, default_penalty(2));
  const InitialData data = sine_datum();

  auto terminal = [&](double dt) {
    SolveConfig cfg;
    cfg.dt = dt;
    cfg.T = 0.25;
    const Trajectory tr = run(scheme, data, cfg);
    REQUIRE(!tr.failed);
    return tr.snapshots.back();
  };
  const SolverState a = terminal(1.0 / 128.0);
  const SolverState b = terminal(1.0 / 256.0);
  const SolverState c = terminal(1.0 / 512.0);
  const double e1 = std::sqrt((a.u - b.u).l2_norm_sq() + (a.v - b.v).l2_norm_sq());
  const double e2 = std::sqrt((b.u - c.u).l2_norm_sq() + (b.v - c.v).l2_norm_sq());
  CHECK(e1 / e2 >= 4.0 * 0.8);
  CHECK(e1 / e2 <= 4.0 * 1.2);
}

TEST_CASE("difference quotients over the state window") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 4, BcMode::periodic);
  ModelParams params;
  params.bc = BcMode::periodic;
  Scheme scheme(mesh, 1, params, default_penalty(1));
  std::mt19937_64 rng(3);
  const BrokenField phi = random_field(rng, mesh, 1);
  const double dt = 0.25;

  auto state_at = [&](double t, double scale) {
    SolverState s;
    s.t = t;
    s.u = scale * phi;
    s.v = BrokenField::constant(mesh, 1, 0.0);
    s.stress = scheme.eliminate_stress(s.u);
    return s;
  };

  // stationary: everything vanishes
  std::vector<SolverState> win{state_at(0.0, 1.0), state_at(dt, 1.0), state_at(2 * dt, 1.0)};
  TimeQuotients q = time_quotients(win, dt, params.well);
  CHECK(std::sqrt(q.du.l2_norm_sq()) <= 1e-12);
  CHECK(std::sqrt(q.d2u.l2_norm_sq()) <= 1e-12);
  CHECK(std::sqrt(q.dwprime.l2_norm_sq()) <= 1e-12);

  // linear in time: first quotient exact, second vanishes
  win = {state_at(0.0, 0.0), state_at(dt, dt), state_at(2 * dt, 2 * dt)};
  q = time_quotients(win, dt, params.well);
  CHECK(std::sqrt((q.du - phi).l2_norm_sq()) <= 1e-12);
  CHECK(std::sqrt(q.d2u.l2_norm_sq()) <= 1e-11);

  // quadratic in time: the three-level second quotient is exact
  win = {state_at(0.0, 0.0), state_at(dt, dt * dt), state_at(2 * dt, 4 * dt * dt)};
  q = time_quotients(win, dt, params.well);
  CHECK(std::sqrt((q.d2u - 2.0 * phi).l2_norm_sq()) <= 1e-11);

  CHECK_THROWS(time_quotients({state_at(0.0, 1.0)}, dt, params.well));
}
