#pragma once

// Exact matrix geometry for symmetric / antisymmetric 3x3 tensors.
//
// SymTensor3 stores the six independent components of a symmetric matrix,
// AntiSymTensor3 the three of an antisymmetric one, so the respective
// symmetry invariants hold exactly by construction.

#include <array>
#include <cmath>

namespace ldg {

struct Mat3;  // fwd

struct SymTensor3 {
  double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;

  static SymTensor3 identity() { return {1, 0, 0, 1, 0, 1}; }
  static SymTensor3 isotropic() { return {1.0 / 3, 0, 0, 1.0 / 3, 0, 1.0 / 3}; }
  static SymTensor3 diag(double a, double b, double c) { return {a, 0, 0, b, 0, c}; }
  // Evaluated as (xx+yy)+zz; callers that re-derive zz = -(xx+yy) or
  // zz = 1-(xx+yy) get an exact 0 / near-exact 1 out of this.
  double trace() const { return (xx + yy) + zz; }

  SymTensor3 operator+(const SymTensor3& o) const {
    return {xx + o.xx, xy + o.xy, xz + o.xz, yy + o.yy, yz + o.yz, zz + o.zz};
  }
  SymTensor3 operator-(const SymTensor3& o) const {
    return {xx - o.xx, xy - o.xy, xz - o.xz, yy - o.yy, yz - o.yz, zz - o.zz};
  }
  SymTensor3 operator*(double s) const { return {xx * s, xy * s, xz * s, yy * s, yz * s, zz * s}; }
  SymTensor3& operator+=(const SymTensor3& o) {
    xx += o.xx; xy += o.xy; xz += o.xz; yy += o.yy; yz += o.yz; zz += o.zz;
    return *this;
  }
  SymTensor3& operator-=(const SymTensor3& o) {
    xx -= o.xx; xy -= o.xy; xz -= o.xz; yy -= o.yy; yz -= o.yz; zz -= o.zz;
    return *this;
  }

  Mat3 full() const;
};

inline SymTensor3 operator*(double s, const SymTensor3& t) { return t * s; }

struct AntiSymTensor3 {
  // Matrix [[0, a12, a13], [-a12, 0, a23], [-a13, -a23, 0]].
  double a12 = 0, a13 = 0, a23 = 0;

  AntiSymTensor3 operator+(const AntiSymTensor3& o) const { return {a12 + o.a12, a13 + o.a13, a23 + o.a23}; }
  AntiSymTensor3 operator-(const AntiSymTensor3& o) const { return {a12 - o.a12, a13 - o.a13, a23 - o.a23}; }
  AntiSymTensor3 operator*(double s) const { return {a12 * s, a13 * s, a23 * s}; }
  AntiSymTensor3& operator+=(const AntiSymTensor3& o) {
    a12 += o.a12; a13 += o.a13; a23 += o.a23;
    return *this;
  }

  double norm2() const { return 2 * (a12 * a12 + a13 * a13 + a23 * a23); }
  double norm() const { return std::sqrt(norm2()); }

  Mat3 full() const;
};

inline AntiSymTensor3 operator*(double s, const AntiSymTensor3& t) { return t * s; }

// Dense 3x3 for the few places where general products are needed.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1;
    return r;
  }

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }
  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
};

inline Mat3 SymTensor3::full() const {
  Mat3 r;
  r.m = {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}};
  return r;
}

inline Mat3 AntiSymTensor3::full() const {
  Mat3 r;
  r.m = {{{0, a12, a13}, {-a12, 0, a23}, {-a13, -a23, 0}}};
  return r;
}

// <A,B> = tr(A^T B).
inline double inner(const SymTensor3& a, const SymTensor3& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

inline double inner(const AntiSymTensor3& a, const AntiSymTensor3& b) {
  return 2 * (a.a12 * b.a12 + a.a13 * b.a13 + a.a23 * b.a23);
}

inline double inner(const Mat3& a, const Mat3& b) {
  double s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a.m[i][j] * b.m[i][j];
  return s;
}

inline double norm2(const SymTensor3& a) { return inner(a, a); }
inline double norm(const SymTensor3& a) { return std::sqrt(norm2(a)); }
inline double norm2(const Mat3& a) { return inner(a, a); }
inline double norm(const Mat3& a) { return std::sqrt(norm2(a)); }

// Symmetric square of a symmetric tensor.
inline SymTensor3 square(const SymTensor3& u) {
  SymTensor3 p;
  p.xx = u.xx * u.xx + u.xy * u.xy + u.xz * u.xz;
  p.xy = u.xx * u.xy + u.xy * u.yy + u.xz * u.yz;
  p.xz = u.xx * u.xz + u.xy * u.yz + u.xz * u.zz;
  p.yy = u.xy * u.xy + u.yy * u.yy + u.yz * u.yz;
  p.yz = u.xy * u.xz + u.yy * u.yz + u.yz * u.zz;
  p.zz = u.xz * u.xz + u.yz * u.yz + u.zz * u.zz;
  return p;
}

// [A;B] = AB - BA; antisymmetric whenever a and b are symmetric.
inline AntiSymTensor3 commutator(const SymTensor3& a, const SymTensor3& b) {
  AntiSymTensor3 c;
  c.a12 = a.xx * b.xy + a.xy * b.yy + a.xz * b.yz - (a.xy * b.xx + a.yy * b.xy + a.yz * b.xz);
  c.a13 = a.xx * b.xz + a.xy * b.yz + a.xz * b.zz - (a.xz * b.xx + a.yz * b.xy + a.zz * b.xz);
  c.a23 = a.xy * b.xz + a.yy * b.yz + a.yz * b.zz - (a.xz * b.xy + a.yz * b.yy + a.zz * b.yz);
  return c;
}

inline Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

inline AntiSymTensor3 commutator(const AntiSymTensor3& a, const AntiSymTensor3& b) {
  // [A;B] for antisymmetric A,B is again antisymmetric (cross product in disguise).
  AntiSymTensor3 c;
  c.a12 = a.a23 * b.a13 - a.a13 * b.a23;
  c.a13 = a.a12 * b.a23 - a.a23 * b.a12;
  c.a23 = a.a13 * b.a12 - a.a12 * b.a13;
  return c;
}

// u*A + A*u for symmetric u, antisymmetric A (antisymmetric result).
inline AntiSymTensor3 sym_anti_anticommutator(const SymTensor3& u, const AntiSymTensor3& A) {
  const Mat3 m = u.full() * A.full() + A.full() * u.full();
  return {m(0, 1), m(0, 2), m(1, 2)};
}

inline double det(const SymTensor3& u) {
  return u.xx * (u.yy * u.zz - u.yz * u.yz) - u.xy * (u.xy * u.zz - u.yz * u.xz) +
         u.xz * (u.xy * u.yz - u.yy * u.xz);
}

// Conjugation R u R^T by a (not necessarily symmetric) 3x3 matrix.
inline SymTensor3 conjugate(const Mat3& r, const SymTensor3& u) {
  const Mat3 m = r * u.full() * r.transpose();
  SymTensor3 out;
  out.xx = m(0, 0);
  out.xy = 0.5 * (m(0, 1) + m(1, 0));
  out.xz = 0.5 * (m(0, 2) + m(2, 0));
  out.yy = m(1, 1);
  out.yz = 0.5 * (m(1, 2) + m(2, 1));
  out.zz = m(2, 2);
  return out;
}

inline AntiSymTensor3 conjugate(const Mat3& r, const AntiSymTensor3& a) {
  const Mat3 m = r * a.full() * r.transpose();
  return {0.5 * (m(0, 1) - m(1, 0)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 2) - m(2, 1))};
}

}  // namespace ldg
