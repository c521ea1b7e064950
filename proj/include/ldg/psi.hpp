#pragma once

// Recovery of the regular part psi0 of the limiting current:
//   j(u0) = (theta_hat / 2 pi r_a) Lambda0 + grad_perp psi0,
// via a componentwise Neumann Poisson solve, plus the residual diagnostics
// of the CMC structure and the Z field.

#include <array>
#include <string>
#include <vector>

#include "ldg/field_ops.hpp"
#include "ldg/grid.hpp"

namespace ldg {

// Residual norms exclude the singular cell and the guard disk of radius 0.1
// around the defect, where the eps-core pollutes pointwise residuals.
inline constexpr double kGuardRadius = 0.1;

struct PsiReport {
  AntiSymField psi;
  double div_residual = 0;     // L2 of div V over the guarded interior
  double cmc_residual_l1 = 0;  // L1 of the CMC equation residual, guarded
  double sup_norm = 0;         // max Frobenius norm of psi over the interior
  double z_l2 = 0;             // L2 of Z = (Lambda - u Lambda - Lambda u)/(2 pi r), guarded
  double compat_mismatch = 0;  // Neumann compatibility defect before correction
};

// V = j - (theta_hat / 2 pi r) Lambda; the cell containing the center is
// zeroed and excluded from every norm.
CurrentField regular_part(const CurrentField& j, std::array<double, 2> center,
                          const AntiSymTensor3& lam);

// Componentwise 5-point Poisson solve: lap psi = rhs on interior cells with
// prescribed face fluxes -grad psi . nu = face_bc on the interior/boundary
// faces (one value per mask.faces entry). The pair is compatibility-corrected
// by a constant shift of rhs; the pre-correction defect is written to
// compat_out (max over components) when given. The solution has zero mean
// over the interior and is extended onto boundary cells through the flux.
AntiSymField solve_neumann_poisson(const AntiSymField& rhs, const std::vector<AntiSymTensor3>& face_bc,
                                   const DomainMask& mask, double* compat_out = nullptr);

// Full recovery for a converged field. lam is the measured circulation
// (mid-radius by convention); bd supplies the boundary trace derivative.
PsiReport recover_psi(const TensorField& field, std::array<double, 2> center,
                      const AntiSymTensor3& lam, const BoundaryData& bd);

// sup |psi| over interior cells with delta <= r < 2*delta about `center`.
double psi_annulus_sup(const AntiSymField& psi, std::array<double, 2> center, double delta);

// CSV: eps,h,div_residual,cmc_residual_l1,sup_norm,z_l2,compat_mismatch
void write_psi_report(const PsiReport& report, double eps, const std::string& path);

// CSV: x,y,psi_12,psi_13,psi_23 (non-exterior cells, row-major)
void write_psi_field(const AntiSymField& psi, const std::string& path);

}  // namespace ldg
