#include "vcdg/model.hpp"

#include <cmath>
#include <stdexcept>

namespace vcdg {

EnergyDensity double_well() {
  EnergyDensity w;
  w.name = "quartic";
  w.max_order = 99;
  w.polynomial = true;
  w.poly_degree = 4;
  w.deriv = [](int m, double u) -> double {
    switch (m) {
      case 0: return (u * u - 1.0) * (u * u - 1.0);
      case 1: return 4.0 * u * (u * u - 1.0);
      case 2: return 12.0 * u * u - 4.0;
      case 3: return 24.0 * u;
      case 4: return 24.0;
      default: return 0.0;
    }
  };
  return w;
}

void ModelParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("params: gamma must be positive");
  if (!(mu >= 0.0)) throw std::invalid_argument("params: mu must be nonnegative");
  if (!(domain_a < domain_b)) throw std::invalid_argument("params: empty domain");
}

TestCase parse_test_case(const std::string& s) {
  if (s == "test1") return TestCase::test1;
  if (s == "test2") return TestCase::test2;
  if (s == "test3") return TestCase::test3;
  if (s == "custom") return TestCase::custom;
  throw std::invalid_argument("unknown test case: " + s);
}

std::string to_string(TestCase t) {
  switch (t) {
    case TestCase::test1: return "test1";
    case TestCase::test2: return "test2";
    case TestCase::test3: return "test3";
    default: return "custom";
  }
}

Test3Variant parse_test3_variant(const std::string& s) {
  if (s == "c1") return Test3Variant::c1;
  if (s == "printed") return Test3Variant::printed;
  throw std::invalid_argument("unknown test3 variant: " + s);
}

ExactSolution exact_steady(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("exact_steady: gamma must be positive");
  const double k = std::sqrt(2.0 / gamma);
  ExactSolution e;
  e.available = true;
  e.u = [k](double x, double) { return std::tanh(k * x); };
  e.dudx = [k](double x, double) {
    const double t = std::tanh(k * x);
    return k * (1.0 - t * t);
  };
  e.v = [](double, double) { return 0.0; };
  e.dvdx = [](double, double) { return 0.0; };
  return e;
}

InitialData initial_data(TestCase test, Test3Variant variant, double gamma,
                         double custom_u0, double custom_v0) {
  InitialData d;
  d.v0 = [](double) { return 0.0; };
  switch (test) {
    case TestCase::test1: {
      const ExactSolution e = exact_steady(gamma);
      d.u0 = [e](double x) { return e.u(x, 0.0); };
      d.du0 = [e](double x) { return e.dudx(x, 0.0); };
      break;
    }
    case TestCase::test2: {
      d.u0 = [](double x) { return 0.01 * std::sin(50.0 * M_PI * x); };
      d.du0 = [](double x) { return 0.5 * M_PI * std::cos(50.0 * M_PI * x); };
      break;
    }
    case TestCase::test3: {
      if (variant == Test3Variant::c1) {
        d.u0 = [](double x) {
          const double r = std::abs(x - 0.5);
          return r <= 0.125 ? 0.25 * (std::cos(8.0 * M_PI * r) + 1.0) : 0.0;
        };
        d.du0 = [](double x) {
          const double r = std::abs(x - 0.5);
          if (r > 0.125) return 0.0;
          const double s = (x >= 0.5) ? 1.0 : -1.0;
          return -2.0 * M_PI * std::sin(8.0 * M_PI * r) * s;
        };
      } else {
        d.u0 = [](double x) {
          const double r = std::abs(x - 0.5);
          return r <= 0.125 ? 0.25 * (std::cos(8.0 * M_PI * r * r) + 1.0) : 0.0;
        };
        d.du0 = [](double x) {
          const double r = std::abs(x - 0.5);
          if (r > 0.125) return 0.0;
          const double s = (x >= 0.5) ? 1.0 : -1.0;
          return -4.0 * M_PI * r * std::sin(8.0 * M_PI * r * r) * s;
        };
      }
      break;
    }
    case TestCase::custom: {
      d.u0 = [custom_u0](double) { return custom_u0; };
      d.du0 = [](double) { return 0.0; };
      d.v0 = [custom_v0](double) { return custom_v0; };
      break;
    }
  }
  return d;
}

ModelParams default_params(TestCase test) {
  ModelParams p;
  switch (test) {
    case TestCase::test1:
      p.gamma = 1e-2;
      p.mu = 1e-2;
      p.bc = BcMode::natural;
      p.domain_a = -1.0;
      p.domain_b = 1.0;
      break;
    case TestCase::test2:
    case TestCase::test3:
      p.gamma = 1e-3;
      p.mu = 1e-1;
      p.bc = BcMode::periodic;
      p.domain_a = 0.0;
      p.domain_b = 1.0;
      break;
    case TestCase::custom:
      break;
  }
  return p;
}

double energy_continuous(const ScalarFn& u, const ScalarFn& du, const ScalarFn& v,
                         const Mesh1D& mesh, const ModelParams& params,
                         int quad_points) {
  const GaussRule& rule = gauss_rule(quad_points);
  double s = 0.0;
  for (int i = 0; i < mesh.n_elements(); ++i) {
    const double h = mesh.width(i);
    const double xm = 0.5 * (mesh.node(i) + mesh.node(i + 1));
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const double x = xm + 0.5 * h * rule.nodes[q];
      const double g = du(x), vv = v(x);
      s += 0.5 * h * rule.weights[q] *
           (params.well(u(x)) + 0.5 * params.gamma * g * g + 0.5 * vv * vv);
    }
  }
  return s;
}

StabilityConstants make_stability_constants(const ModelParams& params, double Mbar) {
  StabilityConstants c;
  c.Mbar = Mbar;
  // C^k norms by dense sampling of |W^(m)| on [-Mbar, Mbar]
  const int samples = 2001;
  double w3 = 0.0, w2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double u = -Mbar + 2.0 * Mbar * i / (samples - 1);
    for (int m = 0; m <= 3; ++m) {
      const double a = std::abs(params.well.d(m, u));
      if (m <= 2) w2 = std::max(w2, a);
      w3 = std::max(w3, a);
    }
  }
  c.Wbar = w3;
  c.Wbarbar = w2;
  c.CP = params.length() / (2.0 * M_PI);
  return c;
}

double stability_K(double grad_sup, const ModelParams& params,
                   const StabilityConstants& c) {
  if (!(params.gamma > 0.0)) throw std::invalid_argument("stability_K: gamma must be positive");
  const double w2 = c.Wbar * c.Wbar;
  return std::max(2.0 * c.CP * c.CP * w2 / params.gamma * grad_sup * grad_sup +
                      2.0 * w2 / params.gamma,
                  1.5);
}

double stability_Ktilde(const ModelParams& params, const StabilityConstants& c) {
  if (!(params.mu > 0.0))
    throw std::invalid_argument("stability_Ktilde: requires mu > 0");
  return std::max(4.0 / (3.0 * params.mu) * (c.Wbarbar * c.Wbarbar + 1.0), 2.0);
}

} // namespace vcdg
