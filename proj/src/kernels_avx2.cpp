#include "ldg/error.hpp"
#include "ldg/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <type_traits>

namespace ldg::kern::avx2 {

namespace {

// One cell body instantiated for double (remainder lanes) and __m256d
// (4 cells at a time). GCC vector extensions give elementwise +,-,* on
// __m256d, so both instantiations evaluate the identical expression tree;
// with contraction disabled the results match the scalar backend bitwise.

template <class V>
inline V vload(const double* p) {
  if constexpr (std::is_same_v<V, double>)
    return *p;
  else
    return _mm256_loadu_pd(p);
}

template <class V>
inline void vstore(double* p, V v) {
  if constexpr (std::is_same_v<V, double>)
    *p = v;
  else
    _mm256_storeu_pd(p, v);
}

template <class V>
inline V vset(double x) {
  if constexpr (std::is_same_v<V, double>)
    return x;
  else
    return _mm256_set1_pd(x);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

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

template <class V>
inline void grad_cells(const double* const* U, double* const* G, int i, int nx, bool wb,
                       double beta, double inv_eps2, double inv_h2) {
  const V xx = vload<V>(U[0] + i), xy = vload<V>(U[1] + i), xz = vload<V>(U[2] + i);
  const V yy = vload<V>(U[3] + i), yz = vload<V>(U[4] + i), zz = vload<V>(U[5] + i);

  const V p0 = xx * xx + xy * xy + xz * xz;
  const V p1 = xx * xy + xy * yy + xz * yz;
  const V p2 = xx * xz + xy * yz + xz * zz;
  const V p3 = xy * xy + yy * yy + yz * yz;
  const V p4 = xy * xz + yy * yz + yz * zz;
  const V p5 = xz * xz + yz * yz + zz * zz;

  V w0, w1, w2, w3, w4, w5;
  if (wb) {
    const V n2 = p0 + p3 + p5;
    const V cf = vset<V>(2.0) * (n2 - vset<V>(1.0));
    const V vb = vset<V>(beta);
    w0 = cf * xx + vb * (xx - p0);
    w1 = cf * xy + vb * (xy - p1);
    w2 = cf * xz + vb * (xz - p2);
    w3 = cf * yy + vb * (yy - p3);
    w4 = cf * yz + vb * (yz - p4);
    w5 = cf * zz + vb * (zz - p5);
  } else {
    const V q0 = p0 * xx + p1 * xy + p2 * xz;
    const V q1 = p0 * xy + p1 * yy + p2 * yz;
    const V q2 = p0 * xz + p1 * yz + p2 * zz;
    const V q3 = p1 * xy + p3 * yy + p4 * yz;
    const V q4 = p1 * xz + p3 * yz + p4 * zz;
    const V q5 = p2 * xz + p4 * yz + p5 * zz;
    const V c3 = vset<V>(3.0), c2 = vset<V>(2.0);
    w0 = xx - c3 * p0 + c2 * q0;
    w1 = xy - c3 * p1 + c2 * q1;
    w2 = xz - c3 * p2 + c2 * q2;
    w3 = yy - c3 * p3 + c2 * q3;
    w4 = yz - c3 * p4 + c2 * q4;
    w5 = zz - c3 * p5 + c2 * q5;
  }

  const V ie = vset<V>(inv_eps2), ih = vset<V>(inv_h2), c4 = vset<V>(4.0);
  const V l0 = (vload<V>(U[0] + i - 1) + vload<V>(U[0] + i + 1)) +
               (vload<V>(U[0] + i - nx) + vload<V>(U[0] + i + nx)) - c4 * xx;
  const V l1 = (vload<V>(U[1] + i - 1) + vload<V>(U[1] + i + 1)) +
               (vload<V>(U[1] + i - nx) + vload<V>(U[1] + i + nx)) - c4 * xy;
  const V l2 = (vload<V>(U[2] + i - 1) + vload<V>(U[2] + i + 1)) +
               (vload<V>(U[2] + i - nx) + vload<V>(U[2] + i + nx)) - c4 * xz;
  const V l3 = (vload<V>(U[3] + i - 1) + vload<V>(U[3] + i + 1)) +
               (vload<V>(U[3] + i - nx) + vload<V>(U[3] + i + nx)) - c4 * yy;
  const V l4 = (vload<V>(U[4] + i - 1) + vload<V>(U[4] + i + 1)) +
               (vload<V>(U[4] + i - nx) + vload<V>(U[4] + i + nx)) - c4 * yz;
  const V l5 = (vload<V>(U[5] + i - 1) + vload<V>(U[5] + i + 1)) +
               (vload<V>(U[5] + i - nx) + vload<V>(U[5] + i + nx)) - c4 * zz;

  V g0 = ie * w0 - ih * l0;
  const V g1 = ie * w1 - ih * l1;
  const V g2 = ie * w2 - ih * l2;
  V g3 = ie * w3 - ih * l3;
  const V g4 = ie * w4 - ih * l4;
  const V g5 = ie * w5 - ih * l5;

  const V tr3 = ((g0 + g3) + g5) * vset<V>(1.0 / 3.0);
  g0 = g0 - tr3;
  g3 = g3 - tr3;
  vstore<V>(G[0] + i, g0);
  vstore<V>(G[1] + i, g1);
  vstore<V>(G[2] + i, g2);
  vstore<V>(G[3] + i, g3);
  vstore<V>(G[4] + i, g4);
  vstore<V>(G[5] + i, vset<V>(0.0) - (g0 + g3));
}

template <class V>
inline void step_cells(const double* const* U, const double* const* G, double* const* O, int i,
                       double dt) {
  const V vdt = vset<V>(dt);
  const V xx = vload<V>(U[0] + i) - vdt * vload<V>(G[0] + i);
  const V yy = vload<V>(U[3] + i) - vdt * vload<V>(G[3] + i);
  vstore<V>(O[0] + i, xx);
  vstore<V>(O[1] + i, vload<V>(U[1] + i) - vdt * vload<V>(G[1] + i));
  vstore<V>(O[2] + i, vload<V>(U[2] + i) - vdt * vload<V>(G[2] + i));
  vstore<V>(O[3] + i, yy);
  vstore<V>(O[4] + i, vload<V>(U[4] + i) - vdt * vload<V>(G[4] + i));
  vstore<V>(O[5] + i, vset<V>(1.0) - xx - yy);
}

template <class V>
inline V edge_term(const double* const* U, int i, int stride) {
  const V d0 = vload<V>(U[0] + i + stride) - vload<V>(U[0] + i);
  const V d1 = vload<V>(U[1] + i + stride) - vload<V>(U[1] + i);
  const V d2 = vload<V>(U[2] + i + stride) - vload<V>(U[2] + i);
  const V d3 = vload<V>(U[3] + i + stride) - vload<V>(U[3] + i);
  const V d4 = vload<V>(U[4] + i + stride) - vload<V>(U[4] + i);
  const V d5 = vload<V>(U[5] + i + stride) - vload<V>(U[5] + i);
  return (d0 * d0 + d3 * d3 + d5 * d5) + vset<V>(2.0) * (d1 * d1 + d2 * d2 + d4 * d4);
}

template <class V>
inline V pot_term(const double* const* U, int i, bool wb, double beta) {
  const V xx = vload<V>(U[0] + i), xy = vload<V>(U[1] + i), xz = vload<V>(U[2] + i);
  const V yy = vload<V>(U[3] + i), yz = vload<V>(U[4] + i), zz = vload<V>(U[5] + i);
  if (wb) {
    const V n2 = (xx * xx + yy * yy + zz * zz) + vset<V>(2.0) * (xy * xy + xz * xz + yz * yz);
    const V i2 = vset<V>(0.5) * (vset<V>(1.0) - n2);
    const V dt3 = xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
    return vset<V>(2.0) * i2 * i2 - vset<V>(beta) * dt3;
  }
  const V p0 = xx * xx + xy * xy + xz * xz;
  const V p1 = xx * xy + xy * yy + xz * yz;
  const V p2 = xx * xz + xy * yz + xz * zz;
  const V p3 = xy * xy + yy * yy + yz * yz;
  const V p4 = xy * xz + yy * yz + yz * zz;
  const V p5 = xz * xz + yz * yz + zz * zz;
  const V d0 = xx - p0, d1 = xy - p1, d2 = xz - p2;
  const V d3 = yy - p3, d4 = yz - p4, d5 = zz - p5;
  return vset<V>(0.5) * (d0 * d0 + d3 * d3 + d5 * d5) + (d1 * d1 + d2 * d2 + d4 * d4);
}

}  // namespace

bool compiled_in() { return true; }

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
  for (const Span& sp : m.interior_spans) {
    const int row = sp.y * nx;
    int i = row + sp.begin;
    const int end = row + sp.end;
    for (; i + 4 <= end; i += 4) grad_cells<__m256d>(U, G, i, nx, pot.use_beta, pot.beta, inv_eps2, inv_h2);
    for (; i < end; ++i) grad_cells<double>(U, G, i, nx, pot.use_beta, pot.beta, inv_eps2, inv_h2);
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
    int i = row + sp.begin;
    const int end = row + sp.end;
    for (; i + 4 <= end; i += 4) step_cells<__m256d>(U, G, O, i, dt);
    for (; i < end; ++i) step_cells<double>(U, G, O, i, dt);
  }
}

EnergyParts energy(const TensorField& u, const PotentialSpec& pot) {
  const DomainMask& m = *u.mask;
  const int nx = u.grid.nx;
  const double* U[6];
  for (int k = 0; k < 6; ++k) U[k] = u.c[k].data();

  CompSum dir;
  auto run_edges = [&](const std::vector<Span>& spans, int stride) {
    for (const Span& sp : spans) {
      const int row = sp.y * nx;
      int i = row + sp.begin;
      const int end = row + sp.end;
      __m256d acc = _mm256_setzero_pd();
      for (; i + 4 <= end; i += 4) acc = acc + edge_term<__m256d>(U, i, stride);
      double tail = 0.0;
      for (; i < end; ++i) tail += edge_term<double>(U, i, stride);
      dir.add(hsum(acc) + tail);
    }
  };
  run_edges(m.xedge_spans, 1);
  run_edges(m.yedge_spans, nx);

  CompSum wsum;
  for (const Span& sp : m.interior_spans) {
    const int row = sp.y * nx;
    int i = row + sp.begin;
    const int end = row + sp.end;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= end; i += 4) acc = acc + pot_term<__m256d>(U, i, pot.use_beta, pot.beta);
    double tail = 0.0;
    for (; i < end; ++i) tail += pot_term<double>(U, i, pot.use_beta, pot.beta);
    wsum.add(hsum(acc) + tail);
  }

  return {0.5 * dir.value(), wsum.value()};
}

}  // namespace ldg::kern::avx2

#else  // !__AVX2__

namespace ldg::kern::avx2 {

bool compiled_in() { return false; }

void grad(const TensorField&, const PotentialSpec&, double, double, TensorField&) {
  fail(Errc::invalid_input, "AVX2 kernels were not compiled in");
}
void step_into(const TensorField&, const TensorField&, double, TensorField&) {
  fail(Errc::invalid_input, "AVX2 kernels were not compiled in");
}
EnergyParts energy(const TensorField&, const PotentialSpec&) {
  fail(Errc::invalid_input, "AVX2 kernels were not compiled in");
}

}  // namespace ldg::kern::avx2

#endif
