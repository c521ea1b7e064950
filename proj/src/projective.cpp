#include "ldg/projective.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/error.hpp"

namespace ldg {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double vnorm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  const double n = vnorm(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

SymTensor3 outer_sym(const Vec3& e) {
  return {e[0] * e[0], e[0] * e[1], e[0] * e[2], e[1] * e[1], e[1] * e[2], e[2] * e[2]};
}

// Largest cross product of two rows of (u - lambda I); null vector of the
// rank-2 pencil. Returns false when every candidate is negligible.
bool null_vector(const SymTensor3& u, double lambda, double scale, Vec3& out) {
  const Vec3 r0{u.xx - lambda, u.xy, u.xz};
  const Vec3 r1{u.xy, u.yy - lambda, u.yz};
  const Vec3 r2{u.xz, u.yz, u.zz - lambda};
  const Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
  const double n01 = dot(c01, c01), n02 = dot(c02, c02), n12 = dot(c12, c12);
  const Vec3* best = &c01;
  double nbest = n01;
  if (n02 > nbest) { best = &c02; nbest = n02; }
  if (n12 > nbest) { best = &c12; nbest = n12; }
  if (nbest <= 1e-24 * scale * scale * scale * scale) return false;
  const double inv = 1.0 / std::sqrt(nbest);
  out = {(*best)[0] * inv, (*best)[1] * inv, (*best)[2] * inv};
  return true;
}

EigenSystem jacobi_sym3(const SymTensor3& u) {
  double a[3][3] = {{u.xx, u.xy, u.xz}, {u.xy, u.yy, u.yz}, {u.xz, u.yz, u.zz}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double scale2 = norm2(u) + 1e-300;
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if (off <= 1e-32 * scale2) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double apq = a[p][q];
        const double app = a[p][p], aqq = a[q][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (int k = 0; k < 3; ++k) {
          if (k != p && k != q) {
            const double akp = a[k][p], akq = a[k][q];
            a[k][p] = a[p][k] = c * akp - s * akq;
            a[k][q] = a[q][k] = s * akp + c * akq;
          }
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenSystem es;
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });
  for (int i = 0; i < 3; ++i) {
    es.lambda[i] = a[order[i]][order[i]];
    es.vec[i] = {v[0][order[i]], v[1][order[i]], v[2][order[i]]};
  }
  return es;
}

}  // namespace

SymTensor3 EigenSystem::reconstruct() const {
  SymTensor3 r;
  for (int i = 0; i < 3; ++i) r += lambda[i] * outer_sym(vec[i]);
  return r;
}

std::array<double, 3> eigenvalues_sym3(const SymTensor3& u) {
  const double q = (u.xx + u.yy + u.zz) / 3.0;
  const double p1 = u.xy * u.xy + u.xz * u.xz + u.yz * u.yz;
  if (p1 == 0.0) {
    std::array<double, 3> l{u.xx, u.yy, u.zz};
    std::sort(l.begin(), l.end(), std::greater<>());
    return l;
  }
  const double dx = u.xx - q, dy = u.yy - q, dz = u.zz - q;
  const double p2 = dx * dx + dy * dy + dz * dz + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  SymTensor3 b = (u - SymTensor3::diag(q, q, q)) * (1.0 / p);
  double r = det(b) / 2.0;
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double l1 = q + 2.0 * p * std::cos(phi);
  const double l3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double l2 = 3.0 * q - l1 - l3;
  return {l1, l2, l3};
}

EigenSystem eigen_sym3(const SymTensor3& u) {
  const auto lambda = eigenvalues_sym3(u);
  const double scale = std::max({1.0, std::abs(lambda[0]), std::abs(lambda[2])});
  const double gap_hi = lambda[0] - lambda[1];
  const double gap_lo = lambda[1] - lambda[2];

  // Near-degenerate roots: the cross-product eigenvectors lose accuracy, go
  // straight to Jacobi.
  if (std::min(gap_hi, gap_lo) < 1e-6 * scale) return jacobi_sym3(u);

  Vec3 e1, e3;
  if (!null_vector(u, lambda[0], scale, e1) || !null_vector(u, lambda[2], scale, e3))
    return jacobi_sym3(u);
  // re-orthogonalize the pair, then complete
  const double c = dot(e1, e3);
  e3 = normalized({e3[0] - c * e1[0], e3[1] - c * e1[1], e3[2] - c * e1[2]});
  const Vec3 e2 = cross(e3, e1);

  EigenSystem es;
  es.lambda = lambda;
  es.vec = {e1, e2, e3};
  if (norm(es.reconstruct() - u) > 1e-11 * scale) return jacobi_sym3(u);
  return es;
}

std::array<double, 3> simplex_project(const std::array<double, 3>& lambda) {
  const double sum = lambda[0] + lambda[1] + lambda[2];
  if (std::abs(sum - 1.0) > 1e-9)
    fail(Errc::invalid_input, "simplex_project: eigenvalues must sum to 1");
  if (lambda[0] < lambda[1] - 1e-12 || lambda[1] < lambda[2] - 1e-12)
    fail(Errc::invalid_input, "simplex_project: eigenvalues must be sorted descending");

  if (lambda[2] >= 0.0) return lambda;
  if (lambda[1] + 0.5 * lambda[2] >= 0.0)
    return {lambda[0] + 0.5 * lambda[2], lambda[1] + 0.5 * lambda[2], 0.0};
  return {1.0, 0.0, 0.0};
}

SymTensor3 project_sigma(const SymTensor3& u) {
  const auto lambda = eigenvalues_sym3(u);
  if (lambda[2] >= 0.0) return u;  // already in Sigma
  const EigenSystem es = eigen_sym3(u);
  const auto mu = simplex_project(es.lambda);
  SymTensor3 v;
  for (int i = 0; i < 3; ++i) v += mu[i] * outer_sym(es.vec[i]);
  return v;
}

double dist_to_p(const SymTensor3& u) {
  const auto l = eigenvalues_sym3(u);
  const double d1 = 1.0 - l[0];
  return std::sqrt(d1 * d1 + l[1] * l[1] + l[2] * l[2]);
}

SymTensor3 nearest_projection_q(const SymTensor3& u, double gap) {
  const EigenSystem es = eigen_sym3(u);
  if (es.lambda[0] - es.lambda[1] <= gap)
    fail(Errc::degenerate_top, "nearest_projection_q: top eigenvalue gap below threshold");
  return outer_sym(es.vec[0]);
}

SymTensor3 dq_apply(const SymTensor3& u, const SymTensor3& a, double gap) {
  const EigenSystem es = eigen_sym3(u);
  if (es.lambda[0] - es.lambda[1] <= gap)
    fail(Errc::degenerate_top, "dq_apply: top eigenvalue gap below threshold");
  // (u - lambda1 I)^+ = sum_{j>=2} (lambda_j - lambda_1)^{-1} e_j e_j^T
  SymTensor3 pinv;
  for (int j = 1; j < 3; ++j) pinv += (1.0 / (es.lambda[j] - es.lambda[0])) * outer_sym(es.vec[j]);
  const Mat3 v = outer_sym(es.vec[0]).full();
  const Mat3 pa = pinv.full() * a.full();
  const Mat3 m = (pa * v + (pa * v).transpose()) * -1.0;
  SymTensor3 out;
  out.xx = m(0, 0);
  out.xy = 0.5 * (m(0, 1) + m(1, 0));
  out.xz = 0.5 * (m(0, 2) + m(2, 0));
  out.yy = m(1, 1);
  out.yz = 0.5 * (m(1, 2) + m(2, 1));
  out.zz = m(2, 2);
  return out;
}

double Rotation3::determinant() const {
  const auto& m = r.m;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 axis_angle_rotation(const std::array<double, 3>& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 k;
  k.m = {{{0, -axis[2], axis[1]}, {axis[2], 0, -axis[0]}, {-axis[1], axis[0], 0}}};
  return Mat3::identity() + k * s + (k * k) * (1.0 - c);
}

Mat3 euler_zyx(double yaw_z, double pitch_y, double roll_x) {
  const Mat3 rz = axis_angle_rotation({0, 0, 1}, yaw_z);
  const Mat3 ry = axis_angle_rotation({0, 1, 0}, pitch_y);
  const Mat3 rx = axis_angle_rotation({1, 0, 0}, roll_x);
  return rz * ry * rx;
}

Rotation3 minimal_rotation(const SymTensor3& a, const SymTensor3& b, double min_inner) {
  if (norm(a - b) < 1e-14) return Rotation3{};

  const double d = inner(a, b);
  if (d <= min_inner)
    fail(Errc::perpendicular_pair, "minimal_rotation: <a,b> too small, rotation degenerates");

  // M = I - 2[a;b] + (2/<a,b>)[a;b]^2 is the rotation by twice the image
  // angle about the mutual annihilator axis; the minimal rotation is its
  // principal square root, recovered by halving the Rodrigues angle.
  const Mat3 k = commutator(a, b).full();
  const Mat3 m = Mat3::identity() - k * 2.0 + (k * k) * (2.0 / d);

  const Vec3 w{0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
  const double sin_theta = vnorm(w);
  const double cos_theta = 0.5 * (m.trace() - 1.0);
  const double theta = std::atan2(sin_theta, cos_theta);
  if (sin_theta < 1e-12) return Rotation3{};  // a ~ b up to rounding

  Rotation3 rot;
  rot.r = axis_angle_rotation({w[0] / sin_theta, w[1] / sin_theta, w[2] / sin_theta}, 0.5 * theta);
  return rot;
}

SymTensor3 geodesic_gamma0(double t) {
  const double c = std::cos(t), s = std::sin(t);
  SymTensor3 g;
  g.xx = 0.5 * (1.0 + c);
  g.xy = 0.5 * s;
  g.yy = 0.5 * (1.0 - c);
  g.xz = g.yz = g.zz = 0.0;
  return g;
}

SymTensor3 geodesic_gamma0_deriv(double t) {
  const double c = std::cos(t), s = std::sin(t);
  SymTensor3 g;
  g.xx = -0.5 * s;
  g.xy = 0.5 * c;
  g.yy = 0.5 * s;
  g.xz = g.yz = g.zz = 0.0;
  return g;
}

AntisymRep antisym_rep(const std::vector<std::pair<double, SymTensor3>>& samples) {
  const std::size_t n = samples.size();
  if (n < 8) fail(Errc::invalid_input, "antisym_rep: need at least 8 samples");
  // uniform spacing over one period, endpoint excluded
  const double dt = samples[1].first - samples[0].first;
  const double inv_two_pi = 1.0 / (2.0 * std::numbers::pi);

  std::vector<AntiSymTensor3> reps(n);
  AntiSymTensor3 mean;
  for (std::size_t i = 0; i < n; ++i) {
    const SymTensor3& prev = samples[(i + n - 1) % n].second;
    const SymTensor3& next = samples[(i + 1) % n].second;
    const SymTensor3 deriv = (next - prev) * (1.0 / (2.0 * dt));
    reps[i] = commutator(samples[i].second, deriv) * inv_two_pi;
    mean += reps[i];
  }
  mean = mean * (1.0 / static_cast<double>(n));

  double dev = 0.0;
  for (const auto& r : reps) dev = std::max(dev, (r - mean).norm());
  return {mean, dev};
}

double geodesic_length(const std::vector<std::pair<double, SymTensor3>>& samples) {
  const std::size_t n = samples.size();
  if (n < 8) fail(Errc::invalid_input, "geodesic_length: need at least 8 samples");
  const double dt = samples[1].first - samples[0].first;
  double len = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SymTensor3& m2 = samples[(i + n - 2) % n].second;
    const SymTensor3& m1 = samples[(i + n - 1) % n].second;
    const SymTensor3& p1 = samples[(i + 1) % n].second;
    const SymTensor3& p2 = samples[(i + 2) % n].second;
    const SymTensor3 deriv = (m2 - p2 + 8.0 * (p1 - m1)) * (1.0 / (12.0 * dt));
    len += norm(deriv) * dt;
  }
  return len;
}

std::vector<std::pair<double, SymTensor3>> sample_gamma0(std::size_t count, const Mat3* frame,
                                                         int winding, double phase) {
  std::vector<std::pair<double, SymTensor3>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    SymTensor3 g = geodesic_gamma0(winding * t + phase);
    if (frame) g = conjugate(*frame, g);
    out.emplace_back(t, g);
  }
  return out;
}

}  // namespace ldg
