#pragma once

// Post-processing of converged fields: defect location, circulation of the
// current around it, the Pohozaev circle function xi(r), potential mass, and
// the log-scaling fit across an eps sweep.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ldg/field_ops.hpp"
#include "ldg/grid.hpp"

namespace ldg {

inline constexpr int kCircleNodes = 256;

// Per-cell sqrt((1-l1)^2 + l2^2 + l3^2); zero on exterior cells.
std::vector<double> dist_to_p_field(const TensorField& field);

struct DefectLocation {
  enum class Status { found, no_defect, multiple_defects };
  Status status = Status::no_defect;
  std::array<double, 2> core{};
  double peak = 0.0;
};

// Argmax of dist-to-P refined by a 3x3 quadratic fit. no_defect when the
// peak stays under 0.1; multiple_defects when a second comparable local
// maximum sits more than 10h away.
DefectLocation locate_defect(const TensorField& field);

// Trapezoid quadrature of bilinearly interpolated j . tau over the circle;
// circle_outside when an interpolation corner leaves the non-exterior cells.
AntiSymTensor3 circulation(const CurrentField& j, std::array<double, 2> center, double r);
AntiSymTensor3 circulation(const TensorField& field, std::array<double, 2> center, double r);

// xi(r) = r * circle integral of (|grad u|^2 / 2 - |grad u . nu|^2).
double pohozaev_xi(const FieldDerivs& d, std::array<double, 2> center, double r);
double pohozaev_xi(const TensorField& field, std::array<double, 2> center, double r);

// (1/eps^2) integral of W over the interior.
double potential_mass(const TensorField& field, double eps,
                      const kern::PotentialSpec& pot = kern::PotentialSpec::eq2());

struct ScalingFit {
  double slope = 0, intercept = 0, residual = 0;
};

// Least squares E = slope * ln(1/eps) + intercept.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& eps_energy);

struct DefectReport {
  std::array<double, 2> core{};
  double peak_dist_to_p = 0;
  std::vector<std::pair<double, AntiSymTensor3>> circulation_by_radius;
  std::vector<std::pair<double, double>> xi_by_radius;
  double energy = 0;
  double eps = 0;
};

// radii are absolute and must be strictly increasing.
DefectReport build_defect_report(const TensorField& field, double eps,
                                 std::array<double, 2> core, const std::vector<double>& radii);

// CSV: eps,core_x,core_y,peak_dist,r,xi,lam_12,lam_13,lam_23,lam_norm
void write_defect_report(const DefectReport& report, const std::string& path);

}  // namespace ldg
