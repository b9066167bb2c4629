#pragma once

#include "vcdg/solver.hpp"

namespace vcdg {

// F with F' = g elementwise and F continuous across faces, F(a) = 0.
// Periodicity of F requires a mean-zero g, which callers check.
BrokenField antiderivative(const BrokenField& g);

void shift_mean(BrokenField& f, double target_mean);

// Smooth solve of gamma w'' = W'(u) - stress with matching mean value.
// The load is the exact elementwise polynomial; closure is periodic or
// zero-Neumann according to the mesh, so the defining residual is roundoff.
BrokenField elliptic_reconstruction(const BrokenField& u, const BrokenField& stress,
                                    const ModelParams& params);

// gamma w'' = P^C_{p+1}[W'(u)] - D^+[stress]; the smoothed load is continuous,
// so the result gains one extra order of regularity.
BrokenField elliptic_reconstruction_smoothed(const BrokenField& u,
                                             const BrokenField& stress,
                                             const ModelParams& params,
                                             const ContinuousProjector& pc);

// w'' = (d/dx) dR1, dR1 the backward quotient of the smoothed reconstruction;
// mean matched against v.
BrokenField velocity_reconstruction(const BrokenField& r1_cur, const BrokenField& r1_prev,
                                    double dt, const BrokenField& v);

// residual of gamma w'' - rhs sampled densely (10(p+1) points per element)
double reconstruction_residual(const BrokenField& w, const BrokenField& rhs,
                               double gamma, int samples_per_elem = 0);

struct EntropyPair {
  double eta_R = 0.0;
  double eta_M = 0.0;
  double velocity_sq = 0.0; // 1/2 int (v_a - v_b)^2
  double gradient_sq = 0.0; // gamma/2 int (u_a' - u_b')^2
  double l2_sq = 0.0;       // 1/2 int (u_a - u_b)^2
  double history = 0.0;     // (mu/4) int_0^t |v_a - v_b|_{H1}^2, caller-supplied
};

struct PairFns {
  ScalarFn u, du, v, dv;
};

PairFns make_pair_fns(const BrokenField& u, const BrokenField& v);
PairFns make_pair_fns(const ExactSolution& exact);

// Reduced relative entropy between two evaluable pairs on the quadrature
// mesh; the history term is the caller's accumulated dissipation integral.
EntropyPair relative_entropy_reduced(const PairFns& a, const PairFns& b,
                                     const Mesh1D& quad_mesh, const ModelParams& params,
                                     double history, int quad_points = 12);
EntropyPair relative_entropy_modified(const PairFns& a, const PairFns& b,
                                      const Mesh1D& quad_mesh, const ModelParams& params,
                                      double history, int quad_points = 12);

// integrand of the history accumulator: |v_a - v_b|_{H1}^2 (full norm)
double h1_diff_sq(const PairFns& a, const PairFns& b, const Mesh1D& quad_mesh,
                  int quad_points = 12);

} // namespace vcdg
