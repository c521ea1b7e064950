#pragma once

// Discrete energy, gradient, and the analysis operators (current field,
// divergence/curl, eigenvalue scans) over masked tensor fields.

#include <utility>

#include "ldg/grid.hpp"
#include "ldg/kernels.hpp"

namespace ldg {

// E_eps(u) = 1/2 sum_edges |du|^2 + (h^2/eps^2) sum_interior W(u).
double energy(const TensorField& field, double eps,
              const kern::PotentialSpec& pot = kern::PotentialSpec::eq2());

// Same sums split: (total, potential part (1/eps^2) integral W).
std::pair<double, double> energy_with_potential_mass(
    const TensorField& field, double eps, const kern::PotentialSpec& pot = kern::PotentialSpec::eq2());

// G = -lap_h u + gradW(u)/eps^2, traceless-projected, zero outside the
// interior. h^2 * <G, delta> is the exact directional derivative of the
// discrete energy for traceless interior perturbations delta.
TensorField energy_gradient(const TensorField& field, double eps,
                            const kern::PotentialSpec& pot = kern::PotentialSpec::eq2());

// Centered differences where both side neighbors are non-exterior, one-sided
// at mask edges; defined on every non-exterior cell.
struct FieldDerivs {
  TensorField dx, dy;  // plain component storage, not trace-1 fields
};
FieldDerivs field_derivatives(const TensorField& field);

// Current j(u) = ([u; u_x], [u; u_y]) per non-exterior cell.
struct CurrentField {
  AntiSymField j1, j2;
};
CurrentField current_field(const TensorField& field);

// div F = dF1/dx + dF2/dy, curlp F = dF2/dx - dF1/dy, centered differences;
// defined on cells whose four neighbors carry values (interior cells).
struct DivCurl {
  AntiSymField div, curl;
};
DivCurl div_and_curl(const AntiSymField& f1, const AntiSymField& f2);

// Spectral scan used by the confinement checks.
struct FieldBounds {
  double min_eig = 0, max_eig = 0, max_norm = 0;
};
FieldBounds field_bounds(const TensorField& field);

// Apply the Sigma projection to every interior cell in place.
void project_sigma_field(TensorField& field);

// Conjugate every non-exterior cell (and the stored boundary trace) by R.
TensorField conjugate_field(const TensorField& field, const Mat3& r);

}  // namespace ldg
