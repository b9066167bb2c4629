#include "vcdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace vcdg {

void legendre_eval(int k, double x, double* vals, double* derivs) {
  vals[0] = 1.0;
  if (derivs) derivs[0] = 0.0;
  if (k == 0) return;
  vals[1] = x;
  if (derivs) derivs[1] = 1.0;
  for (int n = 1; n < k; ++n) {
    vals[n + 1] = ((2 * n + 1) * x * vals[n] - n * vals[n - 1]) / (n + 1);
    if (derivs)
      derivs[n + 1] =
          ((2 * n + 1) * (vals[n] + x * derivs[n]) - n * derivs[n - 1]) / (n + 1);
  }
}

double legendre(int k, double x) {
  std::vector<double> v(static_cast<std::size_t>(k) + 1);
  legendre_eval(k, x, v.data());
  return v[static_cast<std::size_t>(k)];
}

namespace {

GaussRule compute_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_rule: need at least 1 point");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev-based initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, x, v.data(), d.data());
      const double dx = v[static_cast<std::size_t>(n)] / d[static_cast<std::size_t>(n)];
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_eval(n, x, v.data(), d.data());
    const double dp = d[static_cast<std::size_t>(n)];
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // enforce exact symmetry
  for (int i = 0; i < n / 2; ++i) {
    const double xm = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    r.nodes[i] = -xm;
    r.nodes[n - 1 - i] = xm;
    const double wm = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
    r.weights[i] = r.weights[n - 1 - i] = wm;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

std::map<int, GaussRule>& rule_cache() {
  static std::map<int, GaussRule> cache;
  return cache;
}

std::mutex cache_mutex;

} // namespace

const GaussRule& gauss_rule(int n_points) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& cache = rule_cache();
  auto it = cache.find(n_points);
  if (it == cache.end()) it = cache.emplace(n_points, compute_rule(n_points)).first;
  return it->second;
}

const GaussRule& gauss_rule_for_degree(int deg) {
  const int n = deg / 2 + 1; // 2n-1 >= deg
  return gauss_rule(n);
}

} // namespace vcdg
