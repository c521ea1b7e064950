#pragma once

// Flat key = value run configuration. Unknown keys are rejected with the
// offending line; all defaults are listed in the README.

#include <cstdint>
#include <string>
#include <vector>

#include "ldg/grid.hpp"
#include "ldg/solve.hpp"

namespace ldg {

struct RunConfig {
  // domain
  int n = 96;
  double radius = 1.0;
  // boundary
  int k = 1;
  double frame_z = 0.0, frame_y = 0.0, frame_x = 0.0;
  double phase = 0.0;
  // solver
  double eps = 0.25;
  std::vector<double> eps_list;  // sweep values, strictly decreasing
  double dt = 0.0;
  long max_iters = 200000;
  double rel_tol = 1e-3;
  bool sigma_projection = false;
  double beta = 0.0;  // 0 selects the quartic W; otherwise W_beta
  // initialization
  std::string init = "radial-melt";
  std::string snapshot;
  // analysis
  std::vector<double> radii{0.3, 0.4, 0.5, 0.6, 0.7};  // fractions of radius
  // run
  std::string out = "out";
  std::uint64_t seed = 12345;
  std::string kernels = "auto";

  BoundaryData boundary() const;
  SolveConfig solver() const;
  InitMode init_mode() const;
  void apply_kernel_choice() const;
};

RunConfig load_run_config(const std::string& path);

}  // namespace ldg
