#include "ldg/psi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/csv.hpp"
#include "ldg/error.hpp"

namespace ldg {

namespace {

int center_cell(const GridSpec& g, std::array<double, 2> center) {
  const int ix = std::clamp(static_cast<int>(std::floor((center[0] - g.origin[0]) / g.h)), 0, g.nx - 1);
  const int iy = std::clamp(static_cast<int>(std::floor((center[1] - g.origin[1]) / g.h)), 0, g.ny - 1);
  return g.idx(ix, iy);
}

}  // namespace

CurrentField regular_part(const CurrentField& j, std::array<double, 2> center,
                          const AntiSymTensor3& lam) {
  const GridSpec& g = j.j1.grid;
  const DomainMask& m = *j.j1.mask;
  const int singular = center_cell(g, center);
  const double inv_two_pi = 1.0 / (2.0 * std::numbers::pi);

  CurrentField v;
  v.j1.grid = v.j2.grid = g;
  v.j1.mask = v.j2.mask = j.j1.mask;
  v.j1.allocate();
  v.j2.allocate();

  for (int i = 0; i < g.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    if (i == singular) continue;  // zeroed; excluded from all norms
    const double dx = g.cx(i % g.nx) - center[0];
    const double dy = g.cy(i / g.nx) - center[1];
    const double r2 = dx * dx + dy * dy;
    // theta_hat / (2 pi r) = (-dy, dx) / (2 pi r^2)
    const double kx = -dy * inv_two_pi / r2;
    const double ky = dx * inv_two_pi / r2;
    v.j1.set(i, j.j1.at(i) - lam * kx);
    v.j2.set(i, j.j2.at(i) - lam * ky);
  }
  return v;
}

namespace {

// Matrix-free CG for the interior graph Laplacian with flux data folded into
// the right-hand side. Unknowns are compacted interior cells.
struct PoissonWorkspace {
  const DomainMask& mask;
  std::vector<int> compact;           // cell -> compact index or -1
  std::vector<std::array<int, 4>> nbr;  // compact neighbor indices, -1 if none
  int n = 0;

  explicit PoissonWorkspace(const DomainMask& m) : mask(m) {
    const GridSpec& g = m.grid;
    compact.assign(static_cast<std::size_t>(g.cells()), -1);
    n = m.interior_count();
    for (int k = 0; k < n; ++k) compact[static_cast<std::size_t>(m.interior_cells[static_cast<std::size_t>(k)])] = k;
    nbr.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const int i = m.interior_cells[static_cast<std::size_t>(k)];
      const int cand[4] = {i - 1, i + 1, i - g.nx, i + g.nx};
      for (int d = 0; d < 4; ++d) nbr[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)] = compact[static_cast<std::size_t>(cand[d])];
    }
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      int deg = 0;
      for (const int j : nbr[static_cast<std::size_t>(k)]) {
        if (j >= 0) {
          acc += x[static_cast<std::size_t>(j)];
          ++deg;
        }
      }
      y[static_cast<std::size_t>(k)] = deg * x[static_cast<std::size_t>(k)] - acc;
    }
  }

  // Solves A x = b (b made zero-sum by the caller) to ||r|| <= tol ||b||.
  std::vector<double> solve(std::vector<double> b, double tol) const {
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r = b, p = b, ap(static_cast<std::size_t>(n));
    auto dot = [this](const std::vector<double>& a, const std::vector<double>& c) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += a[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
      return s;
    };
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return x;
    double rr = dot(r, r);
    const long max_iters = 40L * n + 1000;
    for (long it = 0; it < max_iters; ++it) {
      if (std::sqrt(rr) <= tol * bnorm) {
        // exact zero-mean normalization
        double mean = 0;
        for (const double v : x) mean += v;
        mean /= n;
        for (double& v : x) v -= mean;
        return x;
      }
      apply(p, ap);
      const double pap = dot(p, ap);
      if (pap <= 0) break;  // nullspace direction; b should prevent this
      const double alpha = rr / pap;
      for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] += alpha * p[static_cast<std::size_t>(k)];
      for (int k = 0; k < n; ++k) r[static_cast<std::size_t>(k)] -= alpha * ap[static_cast<std::size_t>(k)];
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)] + beta * p[static_cast<std::size_t>(k)];
    }
    fail(Errc::solver_diverged, "neumann poisson: CG failed to reach the residual target");
  }
};

}  // namespace

AntiSymField solve_neumann_poisson(const AntiSymField& rhs, const std::vector<AntiSymTensor3>& face_bc,
                                   const DomainMask& mask, double* compat_out) {
  if (face_bc.size() != mask.faces.size())
    fail(Errc::invalid_input, "solve_neumann_poisson: one flux value per mask face required");
  const GridSpec& g = mask.grid;
  const double h = g.h;
  const PoissonWorkspace ws(mask);

  AntiSymField psi;
  psi.grid = g;
  psi.mask = rhs.mask;
  psi.allocate();

  double worst_mismatch = 0.0;
  for (int comp = 0; comp < 3; ++comp) {
    // b_c = -h^2 rhs_c - h * sum of face fluxes at c
    std::vector<double> b(static_cast<std::size_t>(ws.n), 0.0);
    for (int k = 0; k < ws.n; ++k) {
      const int i = mask.interior_cells[static_cast<std::size_t>(k)];
      b[static_cast<std::size_t>(k)] = -h * h * rhs.c[static_cast<std::size_t>(comp)][static_cast<std::size_t>(i)];
    }
    for (std::size_t f = 0; f < mask.faces.size(); ++f) {
      const int k = ws.compact[static_cast<std::size_t>(mask.faces[f].cell)];
      const double* fv = &face_bc[f].a12;
      b[static_cast<std::size_t>(k)] -= h * fv[comp];
    }
    double mismatch = 0.0;
    for (const double v : b) mismatch += v;
    worst_mismatch = std::max(worst_mismatch, std::abs(mismatch));
    const double shift = mismatch / ws.n;
    for (double& v : b) v -= shift;

    const std::vector<double> x = ws.solve(std::move(b), 1e-9);
    for (int k = 0; k < ws.n; ++k) {
      const int i = mask.interior_cells[static_cast<std::size_t>(k)];
      psi.c[static_cast<std::size_t>(comp)][static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(k)];
    }
  }

  // extend onto boundary cells through the prescribed flux: psi_b ~ psi_c - h*bc
  {
    std::vector<int> counts(static_cast<std::size_t>(g.cells()), 0);
    std::vector<std::array<double, 3>> acc(static_cast<std::size_t>(g.cells()), {0, 0, 0});
    for (std::size_t f = 0; f < mask.faces.size(); ++f) {
      const BoundaryFace& face = mask.faces[f];
      const double* fv = &face_bc[f].a12;
      for (int comp = 0; comp < 3; ++comp)
        acc[static_cast<std::size_t>(face.bcell)][static_cast<std::size_t>(comp)] +=
            psi.c[static_cast<std::size_t>(comp)][static_cast<std::size_t>(face.cell)] - h * fv[comp];
      counts[static_cast<std::size_t>(face.bcell)] += 1;
    }
    for (int i = 0; i < g.cells(); ++i) {
      if (counts[static_cast<std::size_t>(i)] == 0) continue;
      for (int comp = 0; comp < 3; ++comp)
        psi.c[static_cast<std::size_t>(comp)][static_cast<std::size_t>(i)] =
            acc[static_cast<std::size_t>(i)][static_cast<std::size_t>(comp)] / counts[static_cast<std::size_t>(i)];
    }
  }

  if (compat_out) *compat_out = worst_mismatch;
  return psi;
}

PsiReport recover_psi(const TensorField& field, std::array<double, 2> center,
                      const AntiSymTensor3& lam, const BoundaryData& bd) {
  const DomainMask& mask = *field.mask;
  const GridSpec& g = field.grid;
  const double h = g.h;
  const double inv_two_pi = 1.0 / (2.0 * std::numbers::pi);

  const CurrentField j = current_field(field);
  const CurrentField v = regular_part(j, center, lam);
  const int singular = center_cell(g, center);

  // rhs = -curl(V); div V is the structural residual of Step 2
  const DivCurl dc = div_and_curl(v.j1, v.j2);
  AntiSymField rhs;
  rhs.grid = g;
  rhs.mask = field.mask;
  rhs.allocate();
  double div_l2 = 0.0;
  for (const int i : mask.interior_cells) {
    rhs.set(i, dc.curl.at(i) * -1.0);
    if (i != singular && mask.cell_r(i) > kGuardRadius) div_l2 += dc.div.at(i).norm2();
  }
  div_l2 = std::sqrt(div_l2 * h * h);

  // boundary trace derivative along the ring: dg/dtheta by centered
  // differences in the angular ordering
  std::vector<AntiSymTensor3> ring_commutator(static_cast<std::size_t>(g.cells()));
  {
    const auto& ring = mask.boundary_ring;
    const std::size_t nring = ring.size();
    for (std::size_t k = 0; k < nring; ++k) {
      const int prev = ring[(k + nring - 1) % nring];
      const int next = ring[(k + 1) % nring];
      double th_p = mask.cell_theta(prev), th_n = mask.cell_theta(next);
      const double th = mask.cell_theta(ring[k]);
      if (th_p > th) th_p -= 2.0 * std::numbers::pi;
      if (th_n < th) th_n += 2.0 * std::numbers::pi;
      const SymTensor3 dgdth =
          (mask.bval[static_cast<std::size_t>(next)] - mask.bval[static_cast<std::size_t>(prev)]) *
          (1.0 / (th_n - th_p));
      ring_commutator[static_cast<std::size_t>(ring[k])] =
          commutator(mask.bval[static_cast<std::size_t>(ring[k])], dgdth);
    }
  }
  (void)bd;  // the trace itself is already baked into mask.bval

  // face fluxes: -grad psi . nu = (rhat.nu / r) ([g; dg/dtheta] - Lambda/2pi)
  std::vector<AntiSymTensor3> face_bc(mask.faces.size());
  for (std::size_t f = 0; f < mask.faces.size(); ++f) {
    const BoundaryFace& face = mask.faces[f];
    const int ci = face.cell, bi = face.bcell;
    const double fx = 0.5 * (g.cx(ci % g.nx) + g.cx(bi % g.nx)) - center[0];
    const double fy = 0.5 * (g.cy(ci / g.nx) + g.cy(bi / g.nx)) - center[1];
    const double r = std::hypot(fx, fy);
    const double rdotnu = (fx * face.nux + fy * face.nuy) / r;
    face_bc[f] = (ring_commutator[static_cast<std::size_t>(bi)] - lam * inv_two_pi) * (rdotnu / r);
  }

  PsiReport rep;
  rep.div_residual = div_l2;
  rep.psi = solve_neumann_poisson(rhs, face_bc, mask, &rep.compat_mismatch);

  // CMC residual: lap psi - 2[psi_x; psi_y] - (1/pi r)[grad psi . theta_hat; Lambda]
  const AntiSymField& psi = rep.psi;
  const int nx = g.nx;
  double cmc = 0.0;
  for (const int i : mask.interior_cells) {
    rep.sup_norm = std::max(rep.sup_norm, psi.at(i).norm());
    if (i == singular || mask.cell_r(i) <= kGuardRadius) continue;
    const AntiSymTensor3 lap =
        (psi.at(i - 1) + psi.at(i + 1) + psi.at(i - nx) + psi.at(i + nx) - psi.at(i) * 4.0) *
        (1.0 / (h * h));
    const AntiSymTensor3 px = (psi.at(i + 1) - psi.at(i - 1)) * (1.0 / (2.0 * h));
    const AntiSymTensor3 py = (psi.at(i + nx) - psi.at(i - nx)) * (1.0 / (2.0 * h));
    const double dx = g.cx(i % nx) - center[0];
    const double dy = g.cy(i / nx) - center[1];
    const double r = std::hypot(dx, dy);
    const AntiSymTensor3 ptheta = px * (-dy / r) + py * (dx / r);
    const AntiSymTensor3 resid =
        lap - commutator(px, py) * 2.0 - commutator(ptheta, lam) * (1.0 / (std::numbers::pi * r));
    cmc += resid.norm();
  }
  rep.cmc_residual_l1 = cmc * h * h;

  // Z = (Lambda - u Lambda - Lambda u) / (2 pi r)
  double z2 = 0.0;
  for (const int i : mask.interior_cells) {
    if (i == singular || mask.cell_r(i) <= kGuardRadius) continue;
    const AntiSymTensor3 z =
        (lam - sym_anti_anticommutator(field.at(i), lam)) * (inv_two_pi / mask.cell_r(i));
    z2 += z.norm2();
  }
  rep.z_l2 = std::sqrt(z2 * h * h);

  return rep;
}

double psi_annulus_sup(const AntiSymField& psi, std::array<double, 2> center, double delta) {
  const DomainMask& m = *psi.mask;
  const GridSpec& g = psi.grid;
  double sup = 0.0;
  for (const int i : m.interior_cells) {
    const double dx = g.cx(i % g.nx) - center[0];
    const double dy = g.cy(i / g.nx) - center[1];
    const double r = std::hypot(dx, dy);
    if (r >= delta && r < 2.0 * delta) sup = std::max(sup, psi.at(i).norm());
  }
  return sup;
}

void write_psi_report(const PsiReport& report, double eps, const std::string& path) {
  CsvWriter w(path);
  w.raw("eps,h,div_residual,cmc_residual_l1,sup_norm,z_l2,compat_mismatch");
  w.field(eps);
  w.field(report.psi.grid.h);
  w.field(report.div_residual);
  w.field(report.cmc_residual_l1);
  w.field(report.sup_norm);
  w.field(report.z_l2);
  w.field(report.compat_mismatch);
  w.end_row();
  if (!w.good()) fail(Errc::io_error, "failed writing psi report: " + path);
}

void write_psi_field(const AntiSymField& psi, const std::string& path) {
  CsvWriter w(path);
  w.raw("x,y,psi_12,psi_13,psi_23");
  const DomainMask& m = *psi.mask;
  for (int i = 0; i < psi.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    const AntiSymTensor3 a = psi.at(i);
    w.field(psi.grid.cx(i % psi.grid.nx));
    w.field(psi.grid.cy(i / psi.grid.nx));
    w.field(a.a12);
    w.field(a.a13);
    w.field(a.a23);
    w.end_row();
  }
  if (!w.good()) fail(Errc::io_error, "failed writing psi field: " + path);
}

}  // namespace ldg
