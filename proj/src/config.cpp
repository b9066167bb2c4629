#include "vcdg/config.hpp"

#include "vcdg/operators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vcdg {

using nlohmann::json;

std::string RunConfig::to_json() const {
  json j;
  j["test"] = test;
  j["n"] = n;
  j["p"] = p;
  j["gamma"] = gamma;
  j["mu"] = mu;
  j["sigma"] = sigma;
  j["dt_coeff"] = dt_coeff;
  j["final_time"] = final_time;
  j["bc_mode"] = bc_mode;
  j["snapshot_stride"] = snapshot_stride;
  j["output_dir"] = output_dir;
  j["test3_variant"] = test3_variant;
  j["seed"] = seed;
  j["domain_a"] = domain_a;
  j["domain_b"] = domain_b;
  j["custom_u0"] = custom_u0;
  j["custom_v0"] = custom_v0;
  j["track_gronwall"] = track_gronwall;
  return j.dump(2);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("test", c.test);
  get("n", c.n);
  get("p", c.p);
  get("gamma", c.gamma);
  get("mu", c.mu);
  if (j.contains("sigma")) {
    if (j.at("sigma").is_number())
      c.sigma = std::to_string(j.at("sigma").get<double>());
    else
      c.sigma = j.at("sigma").get<std::string>();
  }
  get("dt_coeff", c.dt_coeff);
  get("final_time", c.final_time);
  get("bc_mode", c.bc_mode);
  get("snapshot_stride", c.snapshot_stride);
  get("output_dir", c.output_dir);
  get("test3_variant", c.test3_variant);
  get("seed", c.seed);
  get("domain_a", c.domain_a);
  get("domain_b", c.domain_b);
  get("custom_u0", c.custom_u0);
  get("custom_v0", c.custom_v0);
  get("track_gronwall", c.track_gronwall);
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void RunConfig::validate() const {
  parse_test_case(test);
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (p < 0 || p > 3) throw std::invalid_argument("config: p must be in 0..3");
  if (!(dt_coeff > 0.0)) throw std::invalid_argument("config: dt_coeff must be positive");
  if (final_time < 0.0) throw std::invalid_argument("config: final_time must be >= 0");
  if (snapshot_stride < 0) throw std::invalid_argument("config: snapshot_stride >= 0");
  if (bc_mode != "auto" && bc_mode != "periodic" && bc_mode != "natural")
    throw std::invalid_argument("config: bc_mode must be auto|periodic|natural");
  parse_test3_variant(test3_variant);
  if (sigma != "auto") {
    const double s = std::stod(sigma);
    if (!(s > 0.0)) throw std::invalid_argument("config: sigma must be positive");
  }
}

std::uint64_t RunConfig::content_hash() const {
  const std::string s = to_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

ResolvedConfig resolve(const RunConfig& cfg) {
  cfg.validate();
  ResolvedConfig r;
  r.raw = cfg;
  r.test = parse_test_case(cfg.test);
  r.variant = parse_test3_variant(cfg.test3_variant);
  r.params = default_params(r.test);
  if (r.test == TestCase::custom) {
    r.params.domain_a = cfg.domain_a;
    r.params.domain_b = cfg.domain_b;
  }
  if (cfg.gamma >= 0.0) r.params.gamma = cfg.gamma;
  if (cfg.mu >= 0.0) r.params.mu = cfg.mu;
  if (cfg.bc_mode == "periodic") r.params.bc = BcMode::periodic;
  if (cfg.bc_mode == "natural") r.params.bc = BcMode::natural;
  r.params.validate();

  r.sigma = cfg.sigma == "auto" ? default_penalty(cfg.p) : std::stod(cfg.sigma);
  r.dt = cfg.dt_coeff / (static_cast<double>(cfg.n) * cfg.n);
  r.n_steps = cfg.final_time <= 0.0
                  ? 0
                  : static_cast<int>(std::llround(cfg.final_time / r.dt));
  if (cfg.snapshot_stride > 0)
    r.snapshot_stride = cfg.snapshot_stride;
  else
    r.snapshot_stride = std::max(1, r.n_steps / 64);

  r.data = initial_data(r.test, r.variant, r.params.gamma, cfg.custom_u0, cfg.custom_v0);
  if (r.test == TestCase::test1) r.exact = exact_steady(r.params.gamma);
  return r;
}

} // namespace vcdg
