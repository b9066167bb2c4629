#include <doctest.h>

#include "vcdg/space.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

using namespace vcdg;

TEST_CASE("gauss rules: classical nodes and analytic quartic") {
  const GaussRule& r1 = gauss_rule(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.0));
  CHECK(r1.weights[0] == doctest::Approx(2.0));
  const GaussRule& r2 = gauss_rule(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0));
  const GaussRule& r3 = gauss_rule(3);
  double q = 0.0;
  for (int i = 0; i < 3; ++i) q += r3.weights[i] * std::pow(r3.nodes[i], 4);
  CHECK(q == doctest::Approx(0.4).epsilon(1e-14)); // int_{-1}^{1} x^4 = 2/5
}

TEST_CASE("quadrature exactness up to the stated degree") {
  for (int n = 1; n <= 10; ++n) {
    const GaussRule& r = gauss_rule(n);
    for (int d = 0; d <= r.exactness(); ++d) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
      const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) <= 1e-13);
    }
  }
}

TEST_CASE("point evaluation with one-sided limits") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 2, BcMode::periodic);

  BrokenField c = BrokenField::constant(mesh, 1, 3.5);
  CHECK(c.eval(0.3) == doctest::Approx(3.5));
  CHECK(c.eval(0.5, Side::minus) == doctest::Approx(3.5));
  CHECK(c.eval(0.5, Side::plus) == doctest::Approx(3.5));

  BrokenField ind(mesh, 0); // 1 on the first element, 0 elsewhere
  ind.coeff(0, 0) = std::sqrt(mesh->width(0));
  CHECK(ind.eval(0.5, Side::minus) == doctest::Approx(1.0));
  CHECK(ind.eval(0.5, Side::plus) == doctest::Approx(0.0));
  CHECK_THROWS(ind.eval(0.5)); // interior evaluation at a node needs a side
  // periodic identification of the endpoints
  CHECK(ind.eval(0.0, Side::minus) == doctest::Approx(0.0));
  CHECK(ind.eval(0.0, Side::plus) == doctest::Approx(1.0));
  CHECK(ind.eval(1.0, Side::plus) == doctest::Approx(1.0));

  const BrokenField id = project_l2([](double x) { return x; }, mesh, 1);
  CHECK(id.eval(0.25) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("derivatives are exact elementwise") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 2, BcMode::natural);
  const BrokenField c = BrokenField::constant(mesh, 2, 4.0);
  CHECK(c.derivative().l2_norm_sq() == doctest::Approx(0.0));

  const BrokenField sq = project_l2([](double x) { return x * x; }, mesh, 2);
  const BrokenField d = sq.derivative();
  for (double x : {0.1, 0.3, 0.6, 0.9})
    CHECK(d.eval(x) == doctest::Approx(2.0 * x).epsilon(1e-13));

  // repeated differentiation beyond the degree annihilates the field
  BrokenField f = project_l2([](double x) { return 1 + x + x * x * x; }, mesh, 3);
  for (int k = 0; k < 4; ++k) f = f.derivative();
  CHECK(f.l2_norm_sq() == doctest::Approx(0.0));
}

TEST_CASE("L2 projection: idempotent, mean values, oscillatory datum") {
  MeshPtr mesh = build_mesh(0.0, 2.0, 2, BcMode::natural);
  // member of the space reproduces exactly
  std::mt19937_64 rng(5);
  BrokenField g(mesh, 2);
  for (int i = 0; i < g.dofs(); ++i) g.coeffs()[i] = 2.0 * (rng() % 1000) / 1000.0 - 1.0;
  const BrokenField pg = project_l2([&](double x) { return g.eval(x); }, mesh, 2, 10);
  CHECK(std::sqrt((pg - g).l2_norm_sq()) <= 1e-13);

  // mean value on each element: f(x) = x on [0,1] has mean 1/2
  const BrokenField m0 = project_l2([](double x) { return x; }, mesh, 0);
  CHECK(m0.eval(0.5, Side::minus) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m0.eval(1.5) == doctest::Approx(1.5).epsilon(1e-14));

  // oscillatory datum: elementwise means match a high-order quadrature oracle
  MeshPtr fine = build_mesh(0.0, 1.0, 16, BcMode::periodic);
  auto f = [](double x) { return std::sin(50.0 * M_PI * x) / 100.0; };
  const BrokenField ph = project_l2(f, fine, 2);
  const GaussRule& oracle = gauss_rule(30);
  for (int i = 0; i < 16; ++i) {
    const double h = fine->width(i);
    const double xm = 0.5 * (fine->node(i) + fine->node(i + 1));
    double mean = 0.0;
    for (int q = 0; q < oracle.nodes.size(); ++q)
      mean += 0.5 * oracle.weights[q] * f(xm + 0.5 * h * oracle.nodes[q]);
    // default 8-point rule on ~1.5 waves per element: measured defect 9e-10
    CHECK(std::abs(ph.coeff(i, 0) / std::sqrt(h) - mean) <= 5e-9);
  }
}

TEST_CASE("continuous projection: idempotency, constants, hand-solved system") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 2, BcMode::periodic);
  ContinuousProjector pc(mesh, 1);

  const ContinuousField one = pc.apply([](double) { return 1.0; });
  CHECK(one.field.eval(0.3) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(one.field.integral() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(one.continuity_defect <= 1e-12);

  // indicator of the first element projected onto continuous linears:
  // the periodic 2x2 hat mass system [[1/3,1/6],[1/6,1/3]] c = [1/4,1/4]
  // gives c = (1/2, 1/2), i.e. the constant 1/2
  BrokenField ind(mesh, 0);
  ind.coeff(0, 0) = std::sqrt(0.5);
  const ContinuousField pind = pc.apply(ind);
  for (double x : {0.1, 0.26, 0.77})
    CHECK(pind.field.eval(x) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pind.field.integral() == doctest::Approx(ind.integral()).epsilon(1e-12));

  // same datum under natural closure: solve the 3x3 nodal system directly
  MeshPtr nat = build_mesh(0.0, 1.0, 2, BcMode::natural);
  ContinuousProjector pcn(nat, 1);
  Eigen::Matrix3d M;
  M << 1.0 / 6, 1.0 / 12, 0.0,
       1.0 / 12, 1.0 / 3, 1.0 / 12,
       0.0, 1.0 / 12, 1.0 / 6;
  Eigen::Vector3d rhs(0.25, 0.25, 0.0);
  const Eigen::Vector3d nodal = M.fullPivLu().solve(rhs);
  BrokenField indn(nat, 0);
  indn.coeff(0, 0) = std::sqrt(0.5);
  const ContinuousField pn = pcn.apply(indn);
  CHECK(pn.field.eval(0.0, Side::plus) == doctest::Approx(nodal[0]).epsilon(1e-12));
  CHECK(pn.field.eval(0.5, Side::plus) == doctest::Approx(nodal[1]).epsilon(1e-12));
  CHECK(pn.field.eval(1.0, Side::minus) == doctest::Approx(nodal[2]).epsilon(1e-12));

  // idempotency on the range
  const ContinuousField twice = pc.apply(pind.field);
  CHECK(std::sqrt((twice.field - pind.field).l2_norm_sq()) <= 1e-12);
}

TEST_CASE("continuous projection requires degree >= 1") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 4, BcMode::periodic);
  CHECK_THROWS(ContinuousProjector(mesh, 0));
}

TEST_CASE("Ritz projection: reproduction, constants, mean matching") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 4, BcMode::natural);
  const double sigma = default_penalty(2);

  // continuous member of the space reproduces exactly
  auto u0 = [](double x) { return x * (1.0 - x); };
  auto du0 = [](double x) { return 1.0 - 2.0 * x; };
  const BrokenField r = ritz_project(u0, du0, mesh, 2, sigma);
  for (double x : {0.1, 0.4, 0.85})
    CHECK(r.eval(x) == doctest::Approx(u0(x)).epsilon(1e-11));

  const BrokenField rc = ritz_project([](double) { return 2.5; }, [](double) { return 0.0; },
                                      mesh, 2, sigma);
  for (double x : {0.2, 0.6}) CHECK(rc.eval(x) == doctest::Approx(2.5).epsilon(1e-11));

  // steep profile: the projection keeps the exact mean value
  const double gamma = 1e-2;
  const double k = std::sqrt(2.0 / gamma);
  MeshPtr m64 = build_mesh(-1.0, 1.0, 64, BcMode::natural);
  auto steep = [k](double x) { return std::tanh(k * x); };
  auto dsteep = [k](double x) {
    const double t = std::tanh(k * x);
    return k * (1.0 - t * t);
  };
  const BrokenField rp = ritz_project(steep, dsteep, m64, 1, default_penalty(1));
  const GaussRule& oracle = gauss_rule(24);
  double mean = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double h = m64->width(i);
    const double xm = 0.5 * (m64->node(i) + m64->node(i + 1));
    for (int q = 0; q < oracle.nodes.size(); ++q)
      mean += 0.5 * h * oracle.weights[q] * steep(xm + 0.5 * h * oracle.nodes[q]);
  }
  CHECK(std::abs(rp.integral() - mean) <= 1e-12);
}

TEST_CASE("coefficients round-trip through p+1 point evaluations") {
  MeshPtr mesh = build_mesh(-0.5, 1.5, 3, BcMode::natural);
  std::mt19937_64 rng(17);
  for (int p = 0; p <= 3; ++p) {
    BrokenField f(mesh, p);
    for (int i = 0; i < f.dofs(); ++i) f.coeffs()[i] = 2.0 * (rng() % 1000) / 1000.0 - 1.0;
    // fit each element from p+1 samples and compare
    for (int i = 0; i < 3; ++i) {
      Eigen::MatrixXd V(p + 1, p + 1);
      Eigen::VectorXd y(p + 1);
      for (int s = 0; s <= p; ++s) {
        const double xi = (p == 0) ? 0.0 : -1.0 + 2.0 * s / p;
        const double x = mesh->node(i) + 0.5 * mesh->width(i) * (xi + 1.0);
        y[s] = f.eval_in_element(i, x);
        for (int k = 0; k <= p; ++k) V(s, k) = legendre(k, xi);
      }
      const Eigen::VectorXd a = V.fullPivLu().solve(y);
      const Eigen::VectorXd a0 = f.plain_coeffs(i);
      CHECK((a - a0).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
}

TEST_CASE("composition with the quartic is exact") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 3, BcMode::periodic);
  const BrokenField u = project_l2([](double x) { return 2.0 * x - 1.0; }, mesh, 1);
  auto wp = [](double v) { return 4.0 * v * (v * v - 1.0); };
  const BrokenField c = compose(u, wp, 3);
  for (double x : {0.11, 0.47, 0.93})
    CHECK(c.eval(x) == doctest::Approx(wp(2.0 * x - 1.0)).epsilon(1e-12));
}
