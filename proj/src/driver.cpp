#include "vcdg/driver.hpp"

#include <cinttypes>
#include <cstdio>
#include <future>
#include <thread>

namespace vcdg {

RunOutput run_experiment(const RunConfig& cfg) {
  RunOutput out;
  out.cfg = resolve(cfg);
  const ResolvedConfig& rc = out.cfg;
  try {
    MeshPtr mesh = build_mesh(rc.params.domain_a, rc.params.domain_b, cfg.n,
                              rc.params.bc);
    Scheme scheme(mesh, cfg.p, rc.params, rc.sigma);

    EstimatorAccumulator::Options eopt;
    eopt.track_error = rc.exact.has_value();
    eopt.track_gronwall = cfg.track_gronwall && cfg.p >= 1;
    eopt.record_stride = rc.snapshot_stride;
    eopt.final_step = rc.n_steps;

    const bool estimate = cfg.p >= 1; // reconstruction-based path needs p >= 1
    std::optional<EstimatorAccumulator> acc;
    if (estimate) acc.emplace(scheme, eopt, rc.exact, rc.data);

    SolveConfig sc;
    sc.dt = rc.dt;
    sc.T = cfg.final_time;
    sc.snapshot_stride = rc.snapshot_stride;
    out.traj = run(scheme, rc.data, sc, acc ? &*acc : nullptr);

    if (acc) {
      out.records = acc->records();
      out.max_hR = acc->max_hR();
      out.max_eR = acc->max_eR();
    }
    out.ok = !out.traj.failed;
    if (out.traj.failed) out.error = out.traj.failure;
  } catch (const std::exception& ex) {
    out.ok = false;
    out.error = ex.what();
  }
  return out;
}

void write_run_artifacts(const RunOutput& out, const std::string& dir,
                         bool write_states) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const ResolvedConfig& rc = out.cfg;

  { // per-step energy / Newton statistics
    CsvWriter csv(fs::path(dir) / "energy_history.csv",
                  {"step", "t", "energy", "mean_u", "newton_iters", "newton_residual"});
    for (std::size_t i = 0; i < out.traj.step_time.size(); ++i)
      csv.row_mixed({std::to_string(i + 1), CsvWriter::num(out.traj.step_time[i]),
                     CsvWriter::num(out.traj.step_energy[i]),
                     CsvWriter::num(out.traj.step_mean_u[i]),
                     std::to_string(out.traj.step_newton_iters[i]),
                     CsvWriter::num(out.traj.step_newton_residual[i])});
  }

  if (!out.records.empty()) {
    CsvWriter csv(
        fs::path(dir) / "estimator_report.csv",
        {"t",
         "eta1_u_sq", "eta1_dtu_sq", "eta1_dttu_sq",
         "jump_u_invh", "jump_dtu_invh", "jump_v_invh",
         "jump_u", "jump_stress", "jump_dstress", "jump_d2stress",
         "jump_dwp", "jump_d2wp", "jump_dv",
         "sob_wp_2p", "sob_wp_2p2", "sob_dwp_2p2", "sob_d2wp_2p2",
         "osc_wp_dg", "osc_wp_l2", "osc_dwp_l2", "osc_d2wp_l2",
         "tilde", "acc_tilde", "third_integrand", "acc_third",
         "middle_group", "indicator_hR", "full_estimator_sq", "acc_full_sq",
         "initial_sq", "second_quotients",
         "e_R", "e_M", "err_u_dg", "err_u_l2", "err_v_l2",
         "acc_err_hist", "acc_err_hist_sq",
         "K_R1", "acc_K", "Mbar", "energy", "acc_dissipation"});
    for (const EstimatorRecord& r : out.records) {
      const EstimatorTerms& T = r.terms;
      csv.row({r.t,
               T.eta1_u_sq, T.eta1_dtu_sq, T.eta1_dttu_sq,
               T.jump_u_invh, T.jump_dtu_invh, T.jump_v_invh,
               T.jump_u, T.jump_stress, T.jump_dstress, T.jump_d2stress,
               T.jump_dwp, T.jump_d2wp, T.jump_dv,
               T.sob_wp_2p, T.sob_wp_2p2, T.sob_dwp_2p2, T.sob_d2wp_2p2,
               T.osc_wp_dg, T.osc_wp_l2, T.osc_dwp_l2, T.osc_d2wp_l2,
               T.tilde, r.acc_tilde, T.third_integrand, r.acc_third,
               T.middle_group, r.hR, T.full_sq, r.acc_full_sq,
               r.initial_sq, T.second_available ? 1.0 : 0.0,
               r.e_R, r.e_M, r.err_u_dg, r.err_u_l2, r.err_v_l2,
               r.acc_err_hist, r.acc_err_hist_sq,
               r.K_R1, r.acc_K, r.Mbar, r.energy, r.acc_dissipation});
    }
  }

  if (write_states) {
    const fs::path states = fs::path(dir) / "states";
    for (std::size_t i = 0; i < out.traj.snapshots.size(); ++i) {
      const SolverState& s = out.traj.snapshots[i];
      char tag[32];
      std::snprintf(tag, sizeof(tag), "%05zu", i);
      save_field(s.u, states / (std::string("u_") + tag + ".csv"), s.t);
      save_field(s.v, states / (std::string("v_") + tag + ".csv"), s.t);
      save_field(s.stress, states / (std::string("stress_") + tag + ".csv"), s.t);
    }
  }

  { // manifest
    FILE* f = std::fopen((fs::path(dir) / "manifest.json").string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write manifest");
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016" PRIx64, rc.raw.content_hash());
    std::fprintf(f,
                 "{\n\"config\": %s,\n\"content_hash\": \"%s\",\n"
                 "\"ok\": %s,\n\"error\": \"%s\",\n\"n_steps\": %d,\n"
                 "\"max_indicator\": %.9e,\n\"max_error\": %.9e\n}\n",
                 rc.raw.to_json().c_str(), hash, out.ok ? "true" : "false",
                 json_escape(out.error).c_str(), out.traj.n_steps, out.max_hR,
                 out.max_eR);
    std::fclose(f);
  }
}

SweepResult run_converge(const RunConfig& base, const std::vector<int>& Ns,
                         const std::vector<int>& ps, int jobs) {
  if (Ns.size() < 2) throw std::invalid_argument("converge: need at least 2 mesh sizes");
  SweepResult sweep;
  if (jobs <= 0)
    jobs = std::max(1u, std::min(2u, std::thread::hardware_concurrency()));

  struct Job {
    int p, n;
    RunOutput out;
  };
  std::vector<Job> queue;
  for (int p : ps)
    for (int n : Ns) queue.push_back({p, n, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= queue.size()) return;
      RunConfig cfg = base;
      cfg.p = queue[i].p;
      cfg.n = queue[i].n;
      queue[i].out = run_experiment(cfg);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const ResolvedConfig rc0 = resolve(base);
  const double L = rc0.params.domain_b - rc0.params.domain_a;
  for (int p : ps) {
    std::vector<ConvergenceRow>& rows = sweep.tables[p];
    for (int n : Ns) {
      const Job* job = nullptr;
      for (const Job& q : queue)
        if (q.p == p && q.n == n) job = &q;
      ConvergenceRow row;
      row.n = n;
      if (job->out.ok) {
        row.indicator = job->out.max_hR;
        row.error = job->out.max_eR;
        if (row.error > 0.0 && row.indicator > 0.0)
          row.ei = effectivity(row.indicator, row.error);
      } else {
        sweep.ok = false;
        sweep.error = job->out.error;
      }
      if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0)
        row.eoc_error = eoc(rows.back().error, row.error, L / rows.back().n, L / n);
      if (!rows.empty() && rows.back().indicator > 0.0 && row.indicator > 0.0)
        row.eoc_indicator =
            eoc(rows.back().indicator, row.indicator, L / rows.back().n, L / n);
      rows.push_back(row);
    }
  }
  return sweep;
}

void write_convergence_tables(const SweepResult& sweep, const std::string& dir,
                              const std::string& test, bool with_error_columns) {
  namespace fs = std::filesystem;
  for (const auto& [p, rows] : sweep.tables) {
    const fs::path path =
        fs::path(dir) / ("table_" + test + "_p" + std::to_string(p) + ".csv");
    if (with_error_columns) {
      CsvWriter csv(path, {"N", "error", "EOC", "indicator", "EOC", "EI"});
      for (const ConvergenceRow& r : rows)
        csv.row_mixed({std::to_string(r.n),
                       r.error >= 0.0 ? CsvWriter::num(r.error) : "",
                       CsvWriter::num(r.eoc_error),
                       r.indicator >= 0.0 ? CsvWriter::num(r.indicator) : "",
                       CsvWriter::num(r.eoc_indicator),
                       r.ei >= 0.0 ? CsvWriter::num(r.ei) : ""});
    } else {
      CsvWriter csv(path, {"N", "indicator", "EOC"});
      for (const ConvergenceRow& r : rows)
        csv.row_mixed({std::to_string(r.n),
                       r.indicator >= 0.0 ? CsvWriter::num(r.indicator) : "",
                       CsvWriter::num(r.eoc_indicator)});
    }
  }
}

} // namespace vcdg
