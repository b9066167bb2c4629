#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vcdg/model.hpp"

namespace vcdg {

// CLI/JSON-facing run description; snake_case keys match the field names.
struct RunConfig {
  std::string test = "test1";
  int n = 64;
  int p = 1;
  double gamma = -1.0; // negative = use the test default
  double mu = -1.0;
  std::string sigma = "auto"; // "auto" = 10(p+1)^2, else a number
  double dt_coeff = 1.0;      // dt = dt_coeff / n^2
  double final_time = 0.5;
  std::string bc_mode = "auto"; // auto|periodic|natural
  int snapshot_stride = 0;      // 0 = aim for ~64 snapshots
  std::string output_dir = "out";
  std::string test3_variant = "c1"; // c1|printed
  std::uint64_t seed = 0;
  // custom test data and domain
  double domain_a = 0.0, domain_b = 1.0;
  double custom_u0 = 0.0, custom_v0 = 0.0;
  bool track_gronwall = false;

  std::string to_json() const;
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
  void validate() const;
  std::uint64_t content_hash() const;
};

// Everything a run needs, with test defaults and overrides applied.
struct ResolvedConfig {
  RunConfig raw;
  TestCase test = TestCase::test1;
  Test3Variant variant = Test3Variant::c1;
  ModelParams params;
  double sigma = 0.0;
  double dt = 0.0;
  int n_steps = 0;
  int snapshot_stride = 1;
  InitialData data;
  std::optional<ExactSolution> exact;
};

ResolvedConfig resolve(const RunConfig& cfg);

} // namespace vcdg
