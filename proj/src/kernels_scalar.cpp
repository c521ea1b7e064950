#include <cmath>

#include "ldg/kernels.hpp"

namespace ldg::kern::scalar {

namespace {

// Neumaier-compensated accumulator; keeps the reduction deterministic and
// tight regardless of term count.
struct CompSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

void grad(const TensorField& u, const PotentialSpec& pot, double inv_eps2, double inv_h2,
          TensorField& g) {
  const DomainMask& m = *u.mask;
  const int nx = u.grid.nx;
  const double* U[6];
  double* G[6];
  for (int k = 0; k < 6; ++k) {
    U[k] = u.c[k].data();
    G[k] = g.c[k].data();
  }
  const bool wb = pot.use_beta;
  const double beta = pot.beta;

  for (const Span& sp : m.interior_spans) {
    const int row = sp.y * nx;
    for (int i = row + sp.begin; i < row + sp.end; ++i) {
      const double xx = U[0][i], xy = U[1][i], xz = U[2][i];
      const double yy = U[3][i], yz = U[4][i], zz = U[5][i];

      const double p0 = xx * xx + xy * xy + xz * xz;
      const double p1 = xx * xy + xy * yy + xz * yz;
      const double p2 = xx * xz + xy * yz + xz * zz;
      const double p3 = xy * xy + yy * yy + yz * yz;
      const double p4 = xy * xz + yy * yz + yz * zz;
      const double p5 = xz * xz + yz * yz + zz * zz;

      double w0, w1, w2, w3, w4, w5;
      if (wb) {
        const double n2 = p0 + p3 + p5;
        const double cf = 2.0 * (n2 - 1.0);
        w0 = cf * xx + beta * (xx - p0);
        w1 = cf * xy + beta * (xy - p1);
        w2 = cf * xz + beta * (xz - p2);
        w3 = cf * yy + beta * (yy - p3);
        w4 = cf * yz + beta * (yz - p4);
        w5 = cf * zz + beta * (zz - p5);
      } else {
        const double q0 = p0 * xx + p1 * xy + p2 * xz;
        const double q1 = p0 * xy + p1 * yy + p2 * yz;
        const double q2 = p0 * xz + p1 * yz + p2 * zz;
        const double q3 = p1 * xy + p3 * yy + p4 * yz;
        const double q4 = p1 * xz + p3 * yz + p4 * zz;
        const double q5 = p2 * xz + p4 * yz + p5 * zz;
        w0 = xx - 3.0 * p0 + 2.0 * q0;
        w1 = xy - 3.0 * p1 + 2.0 * q1;
        w2 = xz - 3.0 * p2 + 2.0 * q2;
        w3 = yy - 3.0 * p3 + 2.0 * q3;
        w4 = yz - 3.0 * p4 + 2.0 * q4;
        w5 = zz - 3.0 * p5 + 2.0 * q5;
      }

      double g0, g1, g2, g3, g4, g5;
      {
        const double l0 = (U[0][i - 1] + U[0][i + 1]) + (U[0][i - nx] + U[0][i + nx]) - 4.0 * xx;
        const double l1 = (U[1][i - 1] + U[1][i + 1]) + (U[1][i - nx] + U[1][i + nx]) - 4.0 * xy;
        const double l2 = (U[2][i - 1] + U[2][i + 1]) + (U[2][i - nx] + U[2][i + nx]) - 4.0 * xz;
        const double l3 = (U[3][i - 1] + U[3][i + 1]) + (U[3][i - nx] + U[3][i + nx]) - 4.0 * yy;
        const double l4 = (U[4][i - 1] + U[4][i + 1]) + (U[4][i - nx] + U[4][i + nx]) - 4.0 * yz;
        const double l5 = (U[5][i - 1] + U[5][i + 1]) + (U[5][i - nx] + U[5][i + nx]) - 4.0 * zz;
        g0 = inv_eps2 * w0 - inv_h2 * l0;
        g1 = inv_eps2 * w1 - inv_h2 * l1;
        g2 = inv_eps2 * w2 - inv_h2 * l2;
        g3 = inv_eps2 * w3 - inv_h2 * l3;
        g4 = inv_eps2 * w4 - inv_h2 * l4;
        g5 = inv_eps2 * w5 - inv_h2 * l5;
      }

      // traceless projection; zz slot recomputed so the trace is exactly 0
      const double tr3 = ((g0 + g3) + g5) * (1.0 / 3.0);
      g0 -= tr3;
      g3 -= tr3;
      G[0][i] = g0;
      G[1][i] = g1;
      G[2][i] = g2;
      G[3][i] = g3;
      G[4][i] = g4;
      G[5][i] = 0.0 - (g0 + g3);  // matches the SIMD variant bitwise, signed zero included
    }
  }
}

void step_into(const TensorField& u, const TensorField& g, double dt, TensorField& out) {
  const DomainMask& m = *u.mask;
  const int nx = u.grid.nx;
  const double* U[6];
  const double* G[6];
  double* O[6];
  for (int k = 0; k < 6; ++k) {
    U[k] = u.c[k].data();
    G[k] = g.c[k].data();
    O[k] = out.c[k].data();
  }
  for (const Span& sp : m.interior_spans) {
    const int row = sp.y * nx;
    for (int i = row + sp.begin; i < row + sp.end; ++i) {
      const double xx = U[0][i] - dt * G[0][i];
      const double yy = U[3][i] - dt * G[3][i];
      O[0][i] = xx;
      O[1][i] = U[1][i] - dt * G[1][i];
      O[2][i] = U[2][i] - dt * G[2][i];
      O[3][i] = yy;
      O[4][i] = U[4][i] - dt * G[4][i];
      O[5][i] = 1.0 - xx - yy;
    }
  }
}

EnergyParts energy(const TensorField& u, const PotentialSpec& pot) {
  const DomainMask& m = *u.mask;
  const int nx = u.grid.nx;
  const double* U[6];
  for (int k = 0; k < 6; ++k) U[k] = u.c[k].data();

  CompSum dir;
  for (const Span& sp : m.xedge_spans) {
    const int row = sp.y * nx;
    for (int i = row + sp.begin; i < row + sp.end; ++i) {
      const double d0 = U[0][i + 1] - U[0][i];
      const double d1 = U[1][i + 1] - U[1][i];
      const double d2 = U[2][i + 1] - U[2][i];
      const double d3 = U[3][i + 1] - U[3][i];
      const double d4 = U[4][i + 1] - U[4][i];
      const double d5 = U[5][i + 1] - U[5][i];
      dir.add((d0 * d0 + d3 * d3 + d5 * d5) + 2.0 * (d1 * d1 + d2 * d2 + d4 * d4));
    }
  }
  for (const Span& sp : m.yedge_spans) {
    const int row = sp.y * nx;
    for (int i = row + sp.begin; i < row + sp.end; ++i) {
      const double d0 = U[0][i + nx] - U[0][i];
      const double d1 = U[1][i + nx] - U[1][i];
      const double d2 = U[2][i + nx] - U[2][i];
      const double d3 = U[3][i + nx] - U[3][i];
      const double d4 = U[4][i + nx] - U[4][i];
      const double d5 = U[5][i + nx] - U[5][i];
      dir.add((d0 * d0 + d3 * d3 + d5 * d5) + 2.0 * (d1 * d1 + d2 * d2 + d4 * d4));
    }
  }

  CompSum wsum;
  const bool wb = pot.use_beta;
  const double beta = pot.beta;
  for (const Span& sp : m.interior_spans) {
    const int row = sp.y * nx;
    for (int i = row + sp.begin; i < row + sp.end; ++i) {
      const double xx = U[0][i], xy = U[1][i], xz = U[2][i];
      const double yy = U[3][i], yz = U[4][i], zz = U[5][i];
      if (wb) {
        const double n2 = (xx * xx + yy * yy + zz * zz) + 2.0 * (xy * xy + xz * xz + yz * yz);
        const double i2 = 0.5 * (1.0 - n2);
        const double dt3 = xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
        wsum.add(2.0 * i2 * i2 - beta * dt3);
      } else {
        const double p0 = xx * xx + xy * xy + xz * xz;
        const double p1 = xx * xy + xy * yy + xz * yz;
        const double p2 = xx * xz + xy * yz + xz * zz;
        const double p3 = xy * xy + yy * yy + yz * yz;
        const double p4 = xy * xz + yy * yz + yz * zz;
        const double p5 = xz * xz + yz * yz + zz * zz;
        const double d0 = xx - p0, d1 = xy - p1, d2 = xz - p2;
        const double d3 = yy - p3, d4 = yz - p4, d5 = zz - p5;
        wsum.add(0.5 * (d0 * d0 + d3 * d3 + d5 * d5) + (d1 * d1 + d2 * d2 + d4 * d4));
      }
    }
  }

  return {0.5 * dir.value(), wsum.value()};
}

}  // namespace ldg::kern::scalar
