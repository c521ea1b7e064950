#pragma once

// Projected explicit gradient flow with adaptive step halving and
// eps-continuation.

#include <cstdint>
#include <vector>

#include "ldg/field_ops.hpp"
#include "ldg/grid.hpp"

namespace ldg {

struct SolveConfig {
  double eps = 0.25;
  double dt = 0.0;  // 0 selects the stability heuristic 0.2 h^2 eps^2 / (eps^2 + h^2)
  long max_iters = 200000;
  double rel_tol = 1e-3;  // in (0, 1e-2]
  bool sigma_projection = false;
  std::vector<double> continuation;  // strictly decreasing eps list (optional)
  kern::PotentialSpec potential = kern::PotentialSpec::eq2();

  void validate() const;
  double initial_dt(double h) const;
};

struct TraceRow {
  long iter = 0;
  double dt = 0, energy = 0, potential_mass = 0;
};

struct SolveResult {
  TensorField field;
  std::vector<TraceRow> energy_trace;  // one row per accepted step
  long iterations = 0;
  bool converged = false;
  double final_eps = 0;
};

// One flow attempt at the current dt. On acceptance the field is updated and
// true returned; otherwise dt is halved (stalled_step below 1e-12) and the
// field left untouched. energy_io, when given, carries the cached energy
// across calls.
bool step(TensorField& field, double eps, double& dt,
          const kern::PotentialSpec& pot = kern::PotentialSpec::eq2(),
          double* energy_io = nullptr);

SolveResult solve(const TensorField& initial, const SolveConfig& cfg);
SolveResult solve(const DomainMask& mask, const BoundaryData& bd, const SolveConfig& cfg,
                  InitMode mode = InitMode::radial_melt, std::uint64_t seed = 0);

// Decreasing-eps sweep, each solve warm-started from the previous field.
std::vector<SolveResult> continuation_sweep(const DomainMask& mask, const BoundaryData& bd,
                                            const SolveConfig& cfg,
                                            InitMode mode = InitMode::radial_melt,
                                            std::uint64_t seed = 0);

}  // namespace ldg
