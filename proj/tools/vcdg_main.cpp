#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "vcdg/checks.hpp"
#include "vcdg/driver.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

void add_overrides(CLI::App* cmd, vcdg::RunConfig& cfg) {
  cmd->add_option("--test", cfg.test, "test1|test2|test3|custom");
  cmd->add_option("--n", cfg.n, "number of elements");
  cmd->add_option("--p", cfg.p, "polynomial degree 0..3");
  cmd->add_option("--gamma", cfg.gamma, "capillarity (negative = test default)");
  cmd->add_option("--mu", cfg.mu, "viscosity (negative = test default)");
  cmd->add_option("--sigma", cfg.sigma, "penalty parameter or 'auto'");
  cmd->add_option("--dt-coeff", cfg.dt_coeff, "dt = dt_coeff / n^2");
  cmd->add_option("--T,--final-time", cfg.final_time, "final time");
  cmd->add_option("--bc", cfg.bc_mode, "auto|periodic|natural");
  cmd->add_option("--stride", cfg.snapshot_stride, "snapshot stride (0 = auto)");
  cmd->add_option("--out", cfg.output_dir, "output directory");
  cmd->add_option("--test3-variant", cfg.test3_variant, "c1|printed");
  cmd->add_option("--seed", cfg.seed, "RNG seed for the property suites");
  cmd->add_flag("--gronwall", cfg.track_gronwall,
                "track the smoothed reconstruction and its growth constant");
}

std::string output_dir(const vcdg::RunConfig& cfg) {
  if (const char* env = std::getenv("VCDG_OUTPUT_DIR")) return env;
  return cfg.output_dir;
}

} // namespace

int main(int argc, char** argv) {
  vcdg::RunConfig cfg;
  // config file first, command-line flags override its keys
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      try {
        cfg = vcdg::RunConfig::from_json_file(argv[i + 1]);
      } catch (const std::exception& ex) {
        std::printf("{\"error\": \"%s\"}\n", vcdg::json_escape(ex.what()).c_str());
        return 2;
      }
    }
  }

  CLI::App app{"1D interior-penalty dG solver for viscosity-capillarity "
               "elastodynamics with a posteriori error indicators"};
  app.require_subcommand(1);
  std::string config_path;

  CLI::App* crun = app.add_subcommand("run", "single experiment");
  crun->add_option("--config", config_path, "JSON config file");
  add_overrides(crun, cfg);

  CLI::App* cconv = app.add_subcommand("converge", "mesh-refinement sweep");
  cconv->add_option("--config", config_path, "JSON config file");
  std::string n_list = "32,64,128,256", p_list = "1,2,3";
  int jobs = 0;
  cconv->add_option("--N", n_list, "comma-separated mesh sizes");
  cconv->add_option("--p-list", p_list, "comma-separated degrees");
  cconv->add_option("--jobs", jobs, "parallel runs (0 = auto)");
  add_overrides(cconv, cfg);

  CLI::App* cself = app.add_subcommand("selftest", "operator and invariant suites");
  std::uint64_t self_seed = 0;
  cself->add_option("--seed", self_seed, "base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(crun)) {
      cfg.validate();
      const vcdg::RunOutput out = vcdg::run_experiment(cfg);
      vcdg::write_run_artifacts(out, output_dir(cfg));
      if (!out.ok) {
        std::printf("{\"error\": \"%s\", \"t_reached\": %.9e}\n",
                    vcdg::json_escape(out.error).c_str(),
                    out.traj.step_time.empty() ? 0.0 : out.traj.step_time.back());
        return 2;
      }
      if (out.max_eR >= 0.0)
        std::printf("run ok: %d steps, max indicator %.6e, max error %.6e\n",
                    out.traj.n_steps, out.max_hR, out.max_eR);
      else
        std::printf("run ok: %d steps, max indicator %.6e\n", out.traj.n_steps,
                    out.max_hR);
      return 0;
    }

    if (app.got_subcommand(cconv)) {
      cfg.validate();
      const std::vector<int> Ns = parse_int_list(n_list);
      const std::vector<int> ps = parse_int_list(p_list);
      const vcdg::SweepResult sweep = vcdg::run_converge(cfg, Ns, ps, jobs);
      const bool with_error = vcdg::parse_test_case(cfg.test) == vcdg::TestCase::test1;
      vcdg::write_convergence_tables(sweep, output_dir(cfg), cfg.test, with_error);
      for (const auto& [p, rows] : sweep.tables) {
        std::printf("p = %d\n", p);
        for (const auto& row : rows) {
          if (with_error)
            std::printf("  N=%4d  err=%.6e EOC=%6.3f  ind=%.6e EOC=%6.3f  EI=%7.2f\n",
                        row.n, row.error, row.eoc_error, row.indicator,
                        row.eoc_indicator, row.ei);
          else
            std::printf("  N=%4d  ind=%.6e EOC=%6.3f\n", row.n, row.indicator,
                        row.eoc_indicator);
        }
      }
      if (!sweep.ok) {
        std::printf("{\"error\": \"%s\"}\n", vcdg::json_escape(sweep.error).c_str());
        return 2;
      }
      return 0;
    }

    if (app.got_subcommand(cself)) {
      const auto results = vcdg::run_selftests(self_seed);
      int failures = 0;
      for (const auto& r : results) {
        std::printf("[%s] %-40s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) ++failures;
      }
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& ex) {
    std::printf("{\"error\": \"%s\"}\n", vcdg::json_escape(ex.what()).c_str());
    return 2;
  }
  return 0;
}
