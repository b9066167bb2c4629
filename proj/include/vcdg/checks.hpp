#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vcdg/solver.hpp"

namespace vcdg {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// deterministic random helpers shared by property suites
MeshPtr random_mesh(std::mt19937_64& rng, bool allow_natural = true);
BrokenField random_field(std::mt19937_64& rng, const MeshPtr& mesh, int degree);

// max relative residual of the elementwise-integration identities over
// `trials` random (mesh, degree, field) cases
double identity_suite_residual(int trials, std::uint64_t seed);

// max relative residual of the gradient duality over random pairs
double duality_suite_residual(int trials, std::uint64_t seed);

struct ReconstructionDefects {
  double continuity = 0.0;  // max face jump of D[psi]
  double trace = 0.0;       // max nodal trace mismatch
  double orthogonality = 0.0;
  double gradient = 0.0;    // moment defect of (D[psi])' against the lifting
};

ReconstructionDefects reconstruction_suite(int trials, std::uint64_t seed);

// full named-check battery for the selftest command
std::vector<CheckResult> run_selftests(std::uint64_t seed);

} // namespace vcdg
