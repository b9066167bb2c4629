#pragma once

#include <Eigen/SparseLU>
#include <string>
#include <vector>

#include "vcdg/model.hpp"
#include "vcdg/operators.hpp"
#include "vcdg/space.hpp"

namespace vcdg {

struct SolverState {
  double t = 0.0;
  BrokenField u, v, stress;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> history;
};

struct StepResult {
  SolverState state;
  NewtonReport newton;
};

// Spatial operators of the semidiscrete scheme on a fixed (mesh, degree):
//   du/dt = G^-[v]
//   dv/dt = G^+[stress] + mu G^+[G^-[v]]
//   stress = P[W'(u)] + gamma L u,  int (L u) Z = A(u, Z),
// with A the coercive interior-penalty form. Testing the stress relation
// with Z = 1 gives int stress = int W'(u).
class Scheme {
public:
  Scheme(MeshPtr mesh, int degree, ModelParams params, double sigma);

  const MeshPtr& mesh() const { return mesh_; }
  int degree() const { return p_; }
  const ModelParams& params() const { return params_; }
  double sigma() const { return sigma_; }

  // P_p[W^(order)(u)] under the scheme quadrature (2p+4 points)
  BrokenField project_well_derivative(const BrokenField& u, int order = 1) const;
  BrokenField eliminate_stress(const BrokenField& u) const;
  std::pair<BrokenField, BrokenField> rhs(const BrokenField& u,
                                          const BrokenField& v) const;

  // gamma/2 A(u,u) + int W(u) + 1/2 |v|^2; decays at rate mu |G^-[v]|^2
  double energy(const SolverState& s) const;
  double dissipation_rate(const BrokenField& v) const;

  SolverState initial_state(const InitialData& data) const;
  StepResult step_cn(const SolverState& s, double dt, double tol, int max_iter,
                     bool damping = false) const;

  const Eigen::SparseMatrix<double>& ip_matrix() const { return A_; }
  const Eigen::SparseMatrix<double>& grad_minus() const { return Gm_; }
  const Eigen::SparseMatrix<double>& grad_plus() const { return Gp_; }

private:
  Eigen::VectorXd stress_coeffs(const Eigen::VectorXd& u) const;
  Eigen::VectorXd well_block_apply(const Eigen::VectorXd& u, int order) const;
  void assemble_jacobian(const Eigen::VectorXd& u, double dt,
                         Eigen::SparseMatrix<double>& J) const;

  MeshPtr mesh_;
  int p_ = 1;
  ModelParams params_;
  double sigma_ = 0.0;
  int nd_ = 0;
  Eigen::SparseMatrix<double> A_, Gm_, Gp_, GpA_, GpGm_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  mutable bool symbolic_done_ = false;
};

struct SolveConfig {
  double dt = 0.0;
  double T = 0.0;
  double newton_tol = 1e-10;
  int newton_max = 30;
  int snapshot_stride = 1; // snapshot every k-th step (t=0 and T always kept)
};

// Observer hook; window holds the most recent states, oldest first,
// at most three levels deep.
class StepObserver {
public:
  virtual ~StepObserver() = default;
  virtual void on_step(const std::vector<SolverState>& window, int step_index) = 0;
};

struct Trajectory {
  std::vector<SolverState> snapshots;
  std::vector<double> snapshot_energy;
  std::vector<double> step_time, step_energy, step_mean_u, step_newton_residual;
  std::vector<int> step_newton_iters;
  int n_steps = 0;
  bool failed = false;
  std::string failure;
};

Trajectory run(const Scheme& scheme, const InitialData& data, const SolveConfig& cfg,
               StepObserver* observer = nullptr);

// Backward difference quotients over the state window (oldest first).
struct TimeQuotients {
  BrokenField du, dv, dstress, dwprime;      // first quotients
  BrokenField d2u, d2stress, d2wprime;       // second quotients (3 levels)
  bool second_available = false;
};

TimeQuotients time_quotients(const std::vector<SolverState>& window, double dt,
                             const EnergyDensity& well);

} // namespace vcdg
