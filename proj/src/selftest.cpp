#include "ldg/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>

#include "ldg/defect.hpp"
#include "ldg/grid.hpp"
#include "ldg/oracles.hpp"
#include "ldg/projective.hpp"
#include "ldg/psi.hpp"

namespace ldg {

namespace {

struct Report {
  bool all_ok = true;
  bool quiet = false;
  void check(const char* name, bool ok, double metric, double tol) {
    all_ok = all_ok && ok;
    if (!quiet || !ok)
      std::printf("[%s] %-28s metric %.6g (tol %.3g)\n", ok ? "PASS" : "FAIL", name, metric, tol);
  }
};

SymTensor3 random_sym(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  SymTensor3 u;
  u.xx = d(rng); u.xy = d(rng); u.xz = d(rng);
  u.yy = d(rng); u.yz = d(rng); u.zz = d(rng);
  return u;
}

SymTensor3 random_trace1(std::mt19937_64& rng) {
  SymTensor3 u = random_sym(rng);
  const double shift = (1.0 - u.trace()) / 3.0;
  u.xx += shift; u.yy += shift; u.zz += shift;
  return u;
}

double eigen_suite(int cases) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    SymTensor3 u = random_sym(rng);
    if (i % 7 == 0) {  // exercise the degenerate fallback
      const auto es = eigen_sym3(u);
      SymTensor3 deg;
      for (int k = 0; k < 3; ++k) {
        const double li = k < 2 ? es.lambda[0] : es.lambda[2];
        const auto& e = es.vec[static_cast<std::size_t>(k)];
        deg += li * SymTensor3{e[0] * e[0], e[0] * e[1], e[0] * e[2], e[1] * e[1], e[1] * e[2], e[2] * e[2]};
      }
      u = deg;
    }
    const EigenSystem es = eigen_sym3(u);
    worst = std::max(worst, norm(es.reconstruct() - u));
  }
  return worst;
}

double simplex_suite(int cases) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> d(-1.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    std::array<double, 3> l{d(rng), d(rng), d(rng)};
    const double shift = (1.0 - (l[0] + l[1] + l[2])) / 3.0;
    for (auto& v : l) v += shift;
    std::sort(l.begin(), l.end(), std::greater<>());
    const auto mine = simplex_project(l);
    const auto ref = oracle::simplex_project_generic(l);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(mine[static_cast<std::size_t>(k)] - ref[static_cast<std::size_t>(k)]));
  }
  return worst;
}

double grad_fd_suite(int cases) {
  std::mt19937_64 rng(303);
  const double betas[3] = {2.0, 3.0, 5.5};
  const double delta = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    const double beta = betas[i % 3];
    const SymTensor3 u = random_trace1(rng);
    const SymTensor3 g = grad_wbeta(u, beta);
    // stored-component FD; off-diagonal slots move two matrix entries
    const double expect[6] = {g.xx, 2 * g.xy, 2 * g.xz, g.yy, 2 * g.yz, g.zz};
    double* slots[6];
    SymTensor3 up = u;
    slots[0] = &up.xx; slots[1] = &up.xy; slots[2] = &up.xz;
    slots[3] = &up.yy; slots[4] = &up.yz; slots[5] = &up.zz;
    double err2 = 0.0, ref2 = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double keep = *slots[k];
      *slots[k] = keep + delta;
      const double wp = potential_wbeta(up, beta);
      *slots[k] = keep - delta;
      const double wm = potential_wbeta(up, beta);
      *slots[k] = keep;
      const double fd = (wp - wm) / (2.0 * delta);
      err2 += (fd - expect[k]) * (fd - expect[k]);
      ref2 += expect[k] * expect[k];
    }
    worst = std::max(worst, std::sqrt(err2) / std::max(std::sqrt(ref2), 1e-6));
  }
  return worst;
}

double rotation_suite(int cases) {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> d(0.0, 1.0);
  auto random_dir = [&]() {
    std::array<double, 3> v{d(rng), d(rng), d(rng)};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return std::array<double, 3>{v[0] / n, v[1] / n, v[2] / n};
  };
  auto proj = [](const std::array<double, 3>& e) {
    return SymTensor3{e[0] * e[0], e[0] * e[1], e[0] * e[2], e[1] * e[1], e[1] * e[2], e[2] * e[2]};
  };
  double worst = 0.0;
  int done = 0;
  while (done < cases) {
    const auto na = random_dir();
    const auto nb = random_dir();
    const SymTensor3 a = proj(na), b = proj(nb);
    if (inner(a, b) < 1e-3) continue;  // stays clear of the perpendicular degeneracy
    ++done;
    const Rotation3 r = minimal_rotation(a, b);
    worst = std::max(worst, norm(conjugate(r.r, a) - b));
    worst = std::max(worst, r.orthogonality_defect());
    worst = std::max(worst, std::abs(r.determinant() - 1.0));
    // mutual annihilator stays fixed
    std::array<double, 3> c{na[1] * nb[2] - na[2] * nb[1], na[2] * nb[0] - na[0] * nb[2],
                            na[0] * nb[1] - na[1] * nb[0]};
    const double cn = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    if (cn > 1e-6) {
      for (auto& v : c) v /= cn;
      worst = std::max(worst, norm(conjugate(r.r, proj(c)) - proj(c)));
    }
  }
  return worst;
}

struct Manufactured {
  // three smooth scalar components of an antisymmetric field
  static double f(int comp, double x, double y) {
    switch (comp) {
      case 0: return std::sin(1.3 * x + 0.4) * std::cos(0.9 * y - 0.2);
      case 1: return std::cos(0.7 * x - 1.1) * std::sin(1.2 * y + 0.3);
      default: return std::sin(0.5 * x + 0.9 * y);
    }
  }
  static double fx(int comp, double x, double y) {
    switch (comp) {
      case 0: return 1.3 * std::cos(1.3 * x + 0.4) * std::cos(0.9 * y - 0.2);
      case 1: return -0.7 * std::sin(0.7 * x - 1.1) * std::sin(1.2 * y + 0.3);
      default: return 0.5 * std::cos(0.5 * x + 0.9 * y);
    }
  }
  static double fy(int comp, double x, double y) {
    switch (comp) {
      case 0: return -0.9 * std::sin(1.3 * x + 0.4) * std::sin(0.9 * y - 0.2);
      case 1: return 1.2 * std::cos(0.7 * x - 1.1) * std::cos(1.2 * y + 0.3);
      default: return 0.9 * std::cos(0.5 * x + 0.9 * y);
    }
  }
  static double lap(int comp, double x, double y) {
    switch (comp) {
      case 0: return -(1.3 * 1.3 + 0.9 * 0.9) * f(0, x, y);
      case 1: return -(0.7 * 0.7 + 1.2 * 1.2) * f(1, x, y);
      default: return -(0.5 * 0.5 + 0.9 * 0.9) * f(2, x, y);
    }
  }
};

double manufactured_error(int n) {
  const DomainMask mask = make_disk_domain(n, 1.0);
  const GridSpec& g = mask.grid;

  AntiSymField rhs;
  rhs.grid = g;
  rhs.mask = std::make_shared<DomainMask>(mask);
  rhs.allocate();
  for (const int i : mask.interior_cells) {
    const double x = g.cx(i % g.nx), y = g.cy(i / g.nx);
    rhs.set(i, {Manufactured::lap(0, x, y), Manufactured::lap(1, x, y), Manufactured::lap(2, x, y)});
  }
  std::vector<AntiSymTensor3> bc(mask.faces.size());
  for (std::size_t f = 0; f < mask.faces.size(); ++f) {
    const BoundaryFace& face = mask.faces[f];
    const double x = 0.5 * (g.cx(face.cell % g.nx) + g.cx(face.bcell % g.nx));
    const double y = 0.5 * (g.cy(face.cell / g.nx) + g.cy(face.bcell / g.nx));
    AntiSymTensor3 v;
    v.a12 = -(Manufactured::fx(0, x, y) * face.nux + Manufactured::fy(0, x, y) * face.nuy);
    v.a13 = -(Manufactured::fx(1, x, y) * face.nux + Manufactured::fy(1, x, y) * face.nuy);
    v.a23 = -(Manufactured::fx(2, x, y) * face.nux + Manufactured::fy(2, x, y) * face.nuy);
    bc[f] = v;
  }

  const AntiSymField psi = solve_neumann_poisson(rhs, bc, mask);

  // compare against psi* with its interior mean removed, componentwise
  double mean[3] = {0, 0, 0};
  for (const int i : mask.interior_cells) {
    const double x = g.cx(i % g.nx), y = g.cy(i / g.nx);
    for (int cpn = 0; cpn < 3; ++cpn) mean[cpn] += Manufactured::f(cpn, x, y);
  }
  for (double& v : mean) v /= mask.interior_count();

  double err2 = 0.0;
  for (const int i : mask.interior_cells) {
    const double x = g.cx(i % g.nx), y = g.cy(i / g.nx);
    const AntiSymTensor3 got = psi.at(i);
    const double d0 = got.a12 - (Manufactured::f(0, x, y) - mean[0]);
    const double d1 = got.a13 - (Manufactured::f(1, x, y) - mean[1]);
    const double d2 = got.a23 - (Manufactured::f(2, x, y) - mean[2]);
    err2 += d0 * d0 + d1 * d1 + d2 * d2;
  }
  return std::sqrt(err2 * g.h * g.h);
}

}  // namespace

int run_selftest(bool quiet) {
  Report rep;
  rep.quiet = quiet;
  const bool perturbed = std::getenv("LDG_SELFTEST_PERTURB") != nullptr;

  {
    const double tol = perturbed ? 1e-30 : 1e-10;
    const double worst = eigen_suite(10000);
    rep.check("eigen-reconstruction", worst <= tol, worst, tol);
  }
  {
    const double worst = simplex_suite(10000);
    rep.check("simplex-vs-oracle", worst <= 1e-8, worst, 1e-8);
  }
  {
    const double worst = grad_fd_suite(1000);
    rep.check("grad-wbeta-vs-fd", worst <= 1e-6, worst, 1e-6);
  }
  {
    const double worst = rotation_suite(1000);
    rep.check("minimal-rotation", worst <= 1e-8, worst, 1e-8);
  }
  {
    const double l0 = geodesic_length(sample_gamma0(512));
    const double expected = std::numbers::pi * std::sqrt(2.0);
    if (!quiet) std::printf("       L0 estimate %.6f (closed geodesic length)\n", l0);
    rep.check("geodesic-length-L0", std::abs(l0 - expected) <= 1e-3, std::abs(l0 - expected), 1e-3);
  }
  {
    const AntisymRep a0 = antisym_rep(sample_gamma0(256));
    const double q = 1.0 / (4.0 * std::numbers::pi);
    double worst = std::abs(a0.mean.a12 - q);
    worst = std::max(worst, std::abs(a0.mean.a13));
    worst = std::max(worst, std::abs(a0.mean.a23));
    worst = std::max(worst, a0.max_deviation);
    rep.check("antisym-representative", worst <= 1e-3, worst, 1e-3);
  }
  {
    const double e32 = manufactured_error(32);
    const double e64 = manufactured_error(64);
    const double e128 = manufactured_error(128);
    const double r1 = e32 / e64, r2 = e64 / e128;
    if (!quiet) std::printf("       poisson errors %.3e %.3e %.3e, ratios %.2f %.2f\n", e32, e64, e128, r1, r2);
    const bool ok = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
    rep.check("poisson-manufactured", ok, r2, 4.0);
  }

  if (!quiet) std::printf("%s\n", rep.all_ok ? "selftest: all suites passed" : "selftest: FAILURES");
  return rep.all_ok ? 0 : 1;
}

}  // namespace ldg
