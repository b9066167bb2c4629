#pragma once

#include <functional>
#include <string>

#include "vcdg/field.hpp"

namespace vcdg {

// Strain energy density with analytic derivatives. `deriv(m, u)` returns
// the m-th derivative at u; polynomial densities report their degree so
// compositions with broken fields stay exact.
struct EnergyDensity {
  std::string name;
  int max_order = 0;
  bool polynomial = false;
  int poly_degree = 0;
  std::function<double(int, double)> deriv;

  double operator()(double u) const { return deriv(0, u); }
  double d(int m, double u) const { return deriv(m, u); }
};

// (u^2 - 1)^2 with exact polynomial derivatives of every order.
EnergyDensity double_well();

struct ModelParams {
  double gamma = 1e-2; // capillarity, must stay positive
  double mu = 1e-2;    // viscosity, may vanish
  EnergyDensity well = double_well();
  BcMode bc = BcMode::periodic;
  double domain_a = 0.0;
  double domain_b = 1.0;

  double length() const { return domain_b - domain_a; }
  void validate() const;
};

enum class TestCase { test1, test2, test3, custom };
enum class Test3Variant { c1, printed };

TestCase parse_test_case(const std::string& s);
std::string to_string(TestCase t);
Test3Variant parse_test3_variant(const std::string& s);

struct InitialData {
  ScalarFn u0, du0, v0;
};

using SpaceTimeFn = std::function<double(double, double)>;

struct ExactSolution {
  bool available = false;
  SpaceTimeFn u, dudx, v, dvdx;
};

// tanh(x sqrt(2/gamma)), v = 0: a standing phase boundary of the quartic well.
ExactSolution exact_steady(double gamma);

// Initial data of the benchmark problems; custom uses constant data.
InitialData initial_data(TestCase test, Test3Variant variant, double gamma,
                         double custom_u0 = 0.0, double custom_v0 = 0.0);

// Default parameters (domain, bc, gamma, mu) of the benchmark problems.
ModelParams default_params(TestCase test);

// int W(u) + (gamma/2)(u')^2 + (1/2)v^2 over the mesh by quadrature.
double energy_continuous(const ScalarFn& u, const ScalarFn& du, const ScalarFn& v,
                         const Mesh1D& mesh, const ModelParams& params,
                         int quad_points = 16);

struct StabilityConstants {
  double Mbar = 0.0;    // sup-norm bound in force
  double Wbar = 0.0;    // C^3 norm of W on [-Mbar, Mbar]
  double Wbarbar = 0.0; // C^2 norm
  double CP = 0.0;      // Poincare constant, L/(2 pi)
};

StabilityConstants make_stability_constants(const ModelParams& params, double Mbar);

// max(2 CP^2 Wbar^2/gamma |du|_inf^2 + 2 Wbar^2/gamma, 3/2)
double stability_K(double grad_sup, const ModelParams& params,
                   const StabilityConstants& c);

// max(4/(3 mu) (Wbarbar^2 + 1), 2); requires mu > 0
double stability_Ktilde(const ModelParams& params, const StabilityConstants& c);

} // namespace vcdg
