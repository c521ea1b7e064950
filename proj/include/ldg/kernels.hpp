#pragma once

// Hot per-cell kernels of the solver: discrete energy, its gradient, and the
// explicit update. A scalar reference implementation and an AVX2 variant are
// provided; the active backend is selected at runtime (CPU detection,
// overridable via LDG_KERNELS=scalar|avx2 or kern::force).
//
// Contract between backends: grad and step_into are pure per-cell maps and
// must produce bitwise-identical planes; the energy reductions may differ in
// rounding only (each backend keeps a fixed summation order, so either one
// is deterministic for a fixed input).

#include "ldg/grid.hpp"

namespace ldg::kern {

// Bulk potential driving the solve: the quartic tr((u-u^2)^2)/2 by default,
// or the invariant form 2 I2^2 - beta I3.
struct PotentialSpec {
  bool use_beta = false;
  double beta = 0.0;

  static PotentialSpec eq2() { return {}; }
  static PotentialSpec wbeta(double b) { return {true, b}; }
};

struct EnergyParts {
  double dirichlet = 0.0;  // 1/2 sum_edges |u_a - u_b|^2  (already includes the 1/2)
  double wsum = 0.0;       // sum_interior W(u); multiply by h^2/eps^2 for the energy term
};

enum class Backend { scalar, avx2 };

Backend active();
void force(Backend b);  // throws invalid_input if the backend is unavailable
void reset_auto();      // back to detection (env override still wins)
bool avx2_supported();
const char* backend_name();

// G = -lap_h(u) + inv_eps2 * gradW(u), traceless-projected, on interior
// cells; non-interior cells of g are left untouched (allocate to zero).
void grad(const TensorField& u, const PotentialSpec& pot, double inv_eps2, double inv_h2,
          TensorField& g);

// out = u - dt*g on interior cells, with the trace re-pinned exactly
// (zz = 1 - xx - yy). Non-interior cells of out are not written.
void step_into(const TensorField& u, const TensorField& g, double dt, TensorField& out);

// Raw energy sums over the mask's edge spans and interior cells.
EnergyParts energy(const TensorField& u, const PotentialSpec& pot);

namespace scalar {
void grad(const TensorField& u, const PotentialSpec& pot, double inv_eps2, double inv_h2,
          TensorField& g);
void step_into(const TensorField& u, const TensorField& g, double dt, TensorField& out);
EnergyParts energy(const TensorField& u, const PotentialSpec& pot);
}  // namespace scalar

namespace avx2 {
bool compiled_in();
void grad(const TensorField& u, const PotentialSpec& pot, double inv_eps2, double inv_h2,
          TensorField& g);
void step_into(const TensorField& u, const TensorField& g, double dt, TensorField& out);
EnergyParts energy(const TensorField& u, const PotentialSpec& pot);
}  // namespace avx2

}  // namespace ldg::kern
