#pragma once

// Geometry of the trace-1 slice: the projector manifold P (rank-one
// orthogonal projections), its convex envelope Sigma, the bulk potentials
// vanishing on P, and the closed geodesic gamma0 with its antisymmetric
// representative.

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "ldg/tensor.hpp"

namespace ldg {

struct EigenSystem {
  // Eigenvalues sorted descending, eigenvectors orthonormal, so that
  // sum_i lambda_i e_i e_i^T reconstructs the input.
  std::array<double, 3> lambda{};
  std::array<std::array<double, 3>, 3> vec{};  // vec[i] is the unit eigenvector of lambda[i]

  SymTensor3 reconstruct() const;
};

// Spectral decomposition of a symmetric 3x3 tensor. Closed-form trigonometric
// roots with a cyclic-Jacobi fallback when the discriminant is too small for
// the analytic eigenvectors to be trustworthy. Degenerate spectra yield an
// arbitrary orthonormal completion.
EigenSystem eigen_sym3(const SymTensor3& u);

// Eigenvalues only (descending); cheaper than the full decomposition.
std::array<double, 3> eigenvalues_sym3(const SymTensor3& u);

// W(u) = 1/2 tr((u - u^2)^2).
inline double potential_w(const SymTensor3& u) {
  const SymTensor3 d = u - square(u);
  return 0.5 * (d.xx * d.xx + d.yy * d.yy + d.zz * d.zz) + (d.xy * d.xy + d.xz * d.xz + d.yz * d.yz);
}

// Unconstrained gradient of W: u - 3u^2 + 2u^3.
inline SymTensor3 grad_w(const SymTensor3& u) {
  const SymTensor3 p = square(u);
  SymTensor3 q;  // p*u, symmetric because p and u commute
  q.xx = p.xx * u.xx + p.xy * u.xy + p.xz * u.xz;
  q.xy = p.xx * u.xy + p.xy * u.yy + p.xz * u.yz;
  q.xz = p.xx * u.xz + p.xy * u.yz + p.xz * u.zz;
  q.yy = p.xy * u.xy + p.yy * u.yy + p.yz * u.yz;
  q.yz = p.xy * u.xz + p.yy * u.yz + p.yz * u.zz;
  q.zz = p.xz * u.xz + p.yz * u.yz + p.zz * u.zz;
  return u - 3 * p + 2 * q;
}

// W_beta(u) = 2 I2(u)^2 - beta I3(u) with I2 = (1 - tr u^2)/2 and I3 in the
// trace-power form (1 - 3 tr u^2 + 2 tr u^3)/6. On the trace-1 slice I3
// equals det(u); the trace-power extension is the one whose unconstrained
// gradient is grad_wbeta below.
inline double potential_wbeta(const SymTensor3& u, double beta) {
  const double tr2 = norm2(u);
  const double tr3 = inner(square(u), u);
  const double i2 = 0.5 * (1.0 - tr2);
  const double i3 = (1.0 - 3.0 * tr2 + 2.0 * tr3) / 6.0;
  return 2.0 * i2 * i2 - beta * i3;
}

// (grad W_beta)(u) = 2(|u|^2 - 1)u + beta(u - u^2); trace (beta-2)(1-|u|^2).
inline SymTensor3 grad_wbeta(const SymTensor3& u, double beta) {
  const double c = 2.0 * (norm2(u) - 1.0);
  return c * u + beta * (u - square(u));
}

// Euclidean projection of a sorted, sum-1 eigenvalue triple onto the
// standard simplex. The two explicit branches cover lambda3 < 0; inputs
// already in the simplex pass through.
std::array<double, 3> simplex_project(const std::array<double, 3>& lambda);

// Pi: nearest point of Sigma (convex envelope of P); spectral simplex
// projection of the eigenvalues.
SymTensor3 project_sigma(const SymTensor3& u);

// dist(u, P) = sqrt((1-lambda1)^2 + lambda2^2 + lambda3^2).
double dist_to_p(const SymTensor3& u);

// Q(u): nearest rank-one projection, e1 (x) e1 of the top eigenvector.
// Throws degenerate_top when lambda1 - lambda2 <= gap.
SymTensor3 nearest_projection_q(const SymTensor3& u, double gap = 1e-8);

// Differential of Q at u applied to a:
//   (D_u Q)(u)(a) = -(u - lambda1 I)^+ a v - v a (u - lambda1 I)^+,  v = Q(u).
// At v in P this is the tangent projection v a (I - v) + (I - v) a v.
SymTensor3 dq_apply(const SymTensor3& u, const SymTensor3& a, double gap = 1e-8);

struct Rotation3 {
  Mat3 r = Mat3::identity();
  double orthogonality_defect() const { return norm(r * r.transpose() - Mat3::identity()); }
  double determinant() const;
};

// Minimal rotation carrying a to b (both in P) while fixing their mutual
// annihilator: R a R^T = b, R c R^T = c. Requires <a,b> > min_inner; the
// construction degenerates as the images become perpendicular.
Rotation3 minimal_rotation(const SymTensor3& a, const SymTensor3& b, double min_inner = 1e-6);

// Rotation about `axis` (unit 3-vector) by `angle`, Rodrigues form.
Mat3 axis_angle_rotation(const std::array<double, 3>& axis, double angle);

// ZYX Euler composition, used to build boundary frames from config angles.
Mat3 euler_zyx(double yaw_z, double pitch_y, double roll_x);

// The closed non-contractible geodesic
//   gamma0(t) = 1/2 (I + [[cos t, sin t, 0], [sin t, -cos t, 0], [0, 0, -1]]),
// period 2*pi, values in P.
SymTensor3 geodesic_gamma0(double t);
SymTensor3 geodesic_gamma0_deriv(double t);

struct AntisymRep {
  AntiSymTensor3 mean;   // average of (1/2pi)[gamma; gamma'] over the samples
  double max_deviation;  // largest |sample - mean| (Frobenius)
};

// Antisymmetric representative of a sampled closed curve in P. The samples
// must be (t, value) pairs ordered by t and covering one period; gamma' is
// taken by periodic centered differences.
AntisymRep antisym_rep(const std::vector<std::pair<double, SymTensor3>>& samples);

// Arc length of a sampled closed curve: trapezoid rule on |gamma'|, with
// gamma' from fourth-order periodic central differences.
double geodesic_length(const std::vector<std::pair<double, SymTensor3>>& samples);

// Convenience sampler of gamma0 over one period (uniform, endpoint excluded).
std::vector<std::pair<double, SymTensor3>> sample_gamma0(std::size_t count, const Mat3* frame = nullptr,
                                                         int winding = 1, double phase = 0.0);

}  // namespace ldg
