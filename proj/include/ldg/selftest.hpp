#pragma once

namespace ldg {

// Oracle suite behind the `selftest` subcommand: eigen reconstruction,
// simplex projection vs the generic oracle, potential gradients vs finite
// differences, minimal-rotation conjugation, geodesic constants, and the
// manufactured Neumann Poisson convergence order. Prints one line per suite;
// returns 0 iff everything passed.
int run_selftest(bool quiet = false);

}  // namespace ldg
