#include <doctest.h>

#include "vcdg/checks.hpp"
#include "vcdg/driver.hpp"

#include <cstdlib>
#include <fstream>

using namespace vcdg;

TEST_CASE("config JSON round trip") {
  RunConfig cfg;
  cfg.test = "test3";
  cfg.n = 48;
  cfg.p = 3;
  cfg.gamma = 2e-3;
  cfg.mu = 0.05;
  cfg.sigma = "12.5";
  cfg.dt_coeff = 0.5;
  cfg.final_time = 0.125;
  cfg.bc_mode = "periodic";
  cfg.snapshot_stride = 7;
  cfg.output_dir = "somewhere";
  cfg.test3_variant = "printed";
  cfg.seed = 99;
  const RunConfig back = RunConfig::from_json_text(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());
  CHECK(back.content_hash() == cfg.content_hash());
  CHECK(back.n == 48);
  CHECK(back.sigma == "12.5");
  CHECK(back.test3_variant == "printed");
}

TEST_CASE("config validation rejects bad input") {
  RunConfig cfg;
  cfg.p = 5;
  CHECK_THROWS(cfg.validate());
  cfg.p = 1;
  cfg.n = 1;
  CHECK_THROWS(cfg.validate());
  cfg.n = 8;
  cfg.bc_mode = "weird";
  CHECK_THROWS(cfg.validate());
  cfg.bc_mode = "auto";
  cfg.sigma = "-3";
  CHECK_THROWS(cfg.validate());
  cfg.sigma = "auto";
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("resolve applies test defaults and overrides") {
  RunConfig cfg;
  cfg.test = "test2";
  ResolvedConfig rc = resolve(cfg);
  CHECK(rc.params.gamma == doctest::Approx(1e-3));
  CHECK(rc.params.mu == doctest::Approx(1e-1));
  CHECK(rc.params.bc == BcMode::periodic);
  CHECK(rc.dt == doctest::Approx(1.0 / (64.0 * 64.0)));
  CHECK(rc.exact.has_value() == false);

  cfg.test = "test1";
  cfg.gamma = 0.02;
  rc = resolve(cfg);
  CHECK(rc.params.gamma == doctest::Approx(0.02));
  CHECK(rc.params.bc == BcMode::natural);
  CHECK(rc.params.domain_a == doctest::Approx(-1.0));
  CHECK(rc.exact.has_value());
}

TEST_CASE("run wiring: errors present only when the solution is known") {
  RunConfig cfg;
  cfg.test = "test1";
  cfg.n = 16;
  cfg.p = 1;
  cfg.final_time = 0.02;
  const RunOutput t1 = run_experiment(cfg);
  REQUIRE(t1.ok);
  CHECK(t1.max_eR > 0.0);
  CHECK(t1.records.back().e_R >= 0.0);

  cfg.test = "test2";
  const RunOutput t2 = run_experiment(cfg);
  REQUIRE(t2.ok);
  CHECK(t2.max_hR > 0.0);
  CHECK(t2.max_eR < 0.0); // no exact solution to compare against
  CHECK(t2.records.back().e_R < 0.0);
}

TEST_CASE("artifacts land on disk and the manifest echoes the config") {
  RunConfig cfg;
  cfg.test = "test2";
  cfg.n = 8;
  cfg.p = 1;
  cfg.final_time = 0.01;
  cfg.snapshot_stride = 2;
  const RunOutput out = run_experiment(cfg);
  REQUIRE(out.ok);
  const std::string dir = "/tmp/vcdg_test_artifacts";
  std::filesystem::remove_all(dir);
  write_run_artifacts(out, dir);
  CHECK(std::filesystem::exists(dir + "/manifest.json"));
  CHECK(std::filesystem::exists(dir + "/energy_history.csv"));
  CHECK(std::filesystem::exists(dir + "/estimator_report.csv"));
  CHECK(std::filesystem::exists(dir + "/states/u_00000.csv"));
  CHECK(std::filesystem::exists(dir + "/states/u_00000.json"));

  std::ifstream in(dir + "/manifest.json");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string manifest = ss.str();
  CHECK(manifest.find("\"test\": \"test2\"") != std::string::npos);
  CHECK(manifest.find("content_hash") != std::string::npos);
  // the embedded config round-trips
  const auto pos = manifest.find("{", 1);
  (void)pos;
}

TEST_CASE("field checkpoints carry the mesh hash sidecar") {
  MeshPtr mesh = build_mesh(0.0, 1.0, 4, BcMode::periodic);
  BrokenField f = BrokenField::constant(mesh, 2, 1.25);
  const std::string path = "/tmp/vcdg_field_ck.csv";
  save_field(f, path, 0.75);
  std::ifstream side("/tmp/vcdg_field_ck.json");
  std::stringstream ss;
  ss << side.rdbuf();
  char expect[32];
  std::snprintf(expect, sizeof(expect), "%016lx",
                static_cast<unsigned long>(mesh->content_hash()));
  CHECK(ss.str().find(expect) != std::string::npos);
  CHECK(ss.str().find("0.75") != std::string::npos);
}

TEST_CASE("convergence sweep produces the table layouts") {
  RunConfig cfg;
  cfg.test = "test2";
  cfg.n = 8;
  cfg.p = 1;
  cfg.final_time = 0.01;
  const SweepResult sweep = run_converge(cfg, {8, 16}, {1}, 1);
  REQUIRE(sweep.ok);
  REQUIRE(sweep.tables.count(1) == 1);
  CHECK(sweep.tables.at(1).size() == 2);
  CHECK(sweep.tables.at(1)[1].eoc_indicator != 0.0);

  const std::string dir = "/tmp/vcdg_test_tables";
  std::filesystem::remove_all(dir);
  write_convergence_tables(sweep, dir, "test2", false);
  std::ifstream in(dir + "/table_test2_p1.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header.find("N,indicator,EOC") == 0);

  write_convergence_tables(sweep, dir, "test1", true);
  std::ifstream in2(dir + "/table_test1_p1.csv");
  std::getline(in2, header);
  CHECK(header.find("N,error,EOC,indicator,EOC,EI") == 0);
}

TEST_CASE("self tests pass for a range of seeds") {
  for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
    const auto results = run_selftests(seed);
    for (const CheckResult& r : results) {
      INFO(r.name, " seed=", seed, " : ", r.detail);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("cli binary: run, converge, selftest smoke") {
#ifdef VCDG_CLI_BINARY
  const std::string bin = VCDG_CLI_BINARY;
  const std::string dir = "/tmp/vcdg_cli_smoke";
  std::filesystem::remove_all(dir);

  // config file + flag override + env var redirect
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfgf(dir + "/cfg.json");
    RunConfig cfg;
    cfg.test = "test2";
    cfg.n = 8;
    cfg.p = 1;
    cfg.final_time = 0.01;
    cfgf << cfg.to_json();
  }
  setenv("VCDG_OUTPUT_DIR", (dir + "/redirect").c_str(), 1);
  const int rc1 = std::system(
      (bin + " run --config " + dir + "/cfg.json --n 12 > " + dir + "/run.log 2>&1").c_str());
  CHECK(rc1 == 0);
  CHECK(std::filesystem::exists(dir + "/redirect/manifest.json"));
  {
    std::ifstream m(dir + "/redirect/manifest.json");
    std::stringstream ss;
    ss << m.rdbuf();
    CHECK(ss.str().find("\"n\": 12") != std::string::npos); // flag beat the file
  }
  unsetenv("VCDG_OUTPUT_DIR");

  const int rc2 = std::system((bin + " selftest > " + dir + "/self.log 2>&1").c_str());
  CHECK(rc2 == 0);

  // invalid degree: nonzero exit, machine-readable error
  const int rc3 = std::system(
      (bin + " run --test test1 --p 5 --out " + dir + "/bad > " + dir + "/bad.log 2>&1").c_str());
  CHECK(rc3 != 0);
  {
    std::ifstream l(dir + "/bad.log");
    std::stringstream ss;
    ss << l.rdbuf();
    CHECK(ss.str().find("{\"error\":") != std::string::npos);
  }

  // bit-identical outputs for identical config and seed
  const std::string o1 = dir + "/d1", o2 = dir + "/d2";
  const int rd1 = std::system(
      (bin + " run --config " + dir + "/cfg.json --out " + o1 + " > /dev/null 2>&1").c_str());
  const int rd2 = std::system(
      (bin + " run --config " + dir + "/cfg.json --out " + o2 + " > /dev/null 2>&1").c_str());
  CHECK(rd1 == 0);
  CHECK(rd2 == 0);
  const int cmp = std::system(
      ("cmp -s " + o1 + "/estimator_report.csv " + o2 + "/estimator_report.csv").c_str());
  CHECK(cmp == 0);
  const int cmp2 =
      std::system(("cmp -s " + o1 + "/states/u_00001.csv " + o2 + "/states/u_00001.csv").c_str());
  CHECK(cmp2 == 0);
#endif
}
