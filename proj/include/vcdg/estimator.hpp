#pragma once

#include <optional>

#include "vcdg/reconstruct.hpp"

namespace vcdg {

// Residual-type elliptic indicator for the interior-penalty form:
//   eta1^2 = sum_K h_K^2 |f - w''|_K^2 + sum_e [ h_e [[w']]^2 + sigma^2/h_e [[w]]^2 ],
// with f the load of the associated second-order problem.
struct Eta1Breakdown {
  double total_sq = 0.0;
  double residual_sq = 0.0;
  double grad_jump_sq = 0.0;
  double value_jump_sq = 0.0;
};

Eta1Breakdown eta1_sq(const BrokenField& w, const BrokenField& f, double sigma);

// All per-level constituents of the indicators; quotient-based entries are
// zero (and flagged) while the history window is too short.
struct EstimatorTerms {
  double t = 0.0;
  bool first_available = false;
  bool second_available = false;

  double eta1_u_sq = 0.0;
  double eta1_dtu_sq = 0.0;
  double eta1_dttu_sq = 0.0;

  double jump_u_invh = 0.0;  // ||sqrt(1/h_E) [[u]]||^2
  double jump_dtu_invh = 0.0;
  double jump_v_invh = 0.0;

  double jump_u = 0.0; // unweighted squared jumps
  double jump_stress = 0.0;
  double jump_dstress = 0.0;
  double jump_d2stress = 0.0;
  double jump_dwp = 0.0;
  double jump_d2wp = 0.0;
  double jump_dv = 0.0;

  // approximation-theoretic surrogates of the oscillation of W'(u):
  // per-element h^{2p} (resp. h^{2p+2}) weighted H^{p+1} seminorms
  double sob_wp_2p = 0.0;
  double sob_wp_2p2 = 0.0;
  double sob_dwp_2p2 = 0.0;
  double sob_d2wp_2p2 = 0.0;

  // sharp computable counterparts: squared distance of W'(u) (and its
  // quotients) to the discrete space through the jump-free nodal projector,
  // in the broken H1 seminorm (dg) and in L2
  double osc_wp_dg = 0.0;
  double osc_wp_l2 = 0.0;
  double osc_dwp_l2 = 0.0;
  double osc_d2wp_l2 = 0.0;

  double tilde = 0.0;            // jump/viscous-jump/oscillation density
  double third_integrand = 0.0;  // integrand of the sqrt(mu)/2 group
  double middle_group = 0.0;     // eta1^2 + (h/gamma^2)(jumps of stress and u)
  double full_sq = 0.0;          // complete squared estimator density
};

EstimatorTerms estimator_terms(const std::vector<SolverState>& window,
                               const std::vector<BrokenField>& wprime, double dt,
                               const ModelParams& params, double sigma);

// convenience overload that composes W'(u) itself
EstimatorTerms estimator_terms(const std::vector<SolverState>& window, double dt,
                               const ModelParams& params, double sigma);

double computed_indicator(double acc_tilde, double middle_group, double acc_third,
                          const ModelParams& params);

// squared data term ||u0-u_h||_dG^2 + ||v0-v_h||^2 plus the weighted
// initial jump/eta1 block
double initial_indicator(const InitialData& data, const SolverState& s0,
                         const ModelParams& params, double sigma);

struct EntropyError {
  double e_R = 0.0;
  double e_M = 0.0;
  double u_dg = 0.0;   // |u - u_h|_dG
  double u_l2 = 0.0;
  double v_l2 = 0.0;
  double hist = 0.0;    // (mu/4) int |v - v_h|_dG  (as displayed, unsquared)
  double hist_sq = 0.0; // squared-variant log
};

EntropyError entropy_error(const SolverState& s, const ExactSolution& exact,
                           const ModelParams& params, double acc_hist,
                           double acc_hist_sq);

double error_dg_sq(const ScalarFn& du_exact, const BrokenField& uh);
double error_l2_sq(const ScalarFn& f_exact, const BrokenField& fh);

// ---- convergence harness ----------------------------------------------

double eoc(double a_coarse, double a_fine, double h_coarse, double h_fine);
std::vector<double> eoc_sequence(const std::vector<double>& values,
                                 const std::vector<double>& widths);
double effectivity(double indicator_max, double error_max);

struct ConvergenceRow {
  int n = 0;
  double error = -1.0;
  double eoc_error = 0.0;
  double indicator = -1.0;
  double eoc_indicator = 0.0;
  double ei = -1.0;
};

// ---- per-run accumulation ----------------------------------------------

struct EstimatorRecord {
  double t = 0.0;
  EstimatorTerms terms;
  double acc_tilde = 0.0, acc_third = 0.0, acc_full_sq = 0.0;
  double hR = 0.0;
  double initial_sq = 0.0;
  double e_R = -1.0, e_M = -1.0;
  double err_u_dg = -1.0, err_v_l2 = -1.0, err_u_l2 = -1.0;
  double acc_err_hist = 0.0, acc_err_hist_sq = 0.0;
  double K_R1 = -1.0, acc_K = 0.0, Mbar = 0.0;
  double energy = 0.0, acc_dissipation = 0.0;
};

// Streams estimator quantities during a run: trapezoid accumulators are
// updated every step and full records are emitted on the snapshot stride.
class EstimatorAccumulator : public StepObserver {
public:
  struct Options {
    bool track_error = false;    // e_R / e_M against a known solution
    bool track_gronwall = false; // smoothed reconstruction and its K
    int record_stride = 1;
    int final_step = -1;
  };

  EstimatorAccumulator(const Scheme& scheme, Options opt,
                       std::optional<ExactSolution> exact = std::nullopt,
                       std::optional<InitialData> data = std::nullopt);

  void on_step(const std::vector<SolverState>& window, int step_index) override;

  const std::vector<EstimatorRecord>& records() const { return records_; }
  double max_hR() const;
  double max_eR() const;

private:
  const Scheme& scheme_;
  Options opt_;
  std::optional<ExactSolution> exact_;
  std::optional<InitialData> data_;
  std::optional<ContinuousProjector> pc_;
  std::vector<BrokenField> wps_;
  std::vector<EstimatorRecord> records_;
  double dt_ = 0.0;
  double initial_sq_ = 0.0;
  double acc_tilde_ = 0.0, acc_third_ = 0.0, acc_full_ = 0.0;
  double acc_hist_ = 0.0, acc_hist_sq_ = 0.0, acc_diss_ = 0.0, acc_K_ = 0.0;
  double prev_tilde_ = 0.0, prev_third_ = 0.0, prev_full_ = 0.0;
  double prev_hist_ = 0.0, prev_hist_sq_ = 0.0, prev_diss_ = 0.0;
  double prev_K_ = 0.0, prev_K_t_ = 0.0;
  double mbar_raw_ = 0.0;
  double prev_t_ = 0.0;
};

} // namespace vcdg
