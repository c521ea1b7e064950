#include "ldg/defect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ldg/csv.hpp"
#include "ldg/error.hpp"

namespace ldg {

std::vector<double> dist_to_p_field(const TensorField& field) {
  const DomainMask& m = *field.mask;
  std::vector<double> d(static_cast<std::size_t>(field.grid.cells()), 0.0);
  for (int i = 0; i < field.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    d[static_cast<std::size_t>(i)] = dist_to_p(field.at(i));
  }
  return d;
}

namespace {

// Bilinear interpolation of a per-cell plane at a physical point; all four
// corner cells must be non-exterior.
struct Interp {
  int i00 = 0, nx = 0;
  double fx = 0, fy = 0;
};

Interp locate_interp(const GridSpec& g, const DomainMask& m, double x, double y) {
  const double gx = (x - g.origin[0]) / g.h - 0.5;
  const double gy = (y - g.origin[1]) / g.h - 0.5;
  const int ix = static_cast<int>(std::floor(gx));
  const int iy = static_cast<int>(std::floor(gy));
  if (ix < 0 || iy < 0 || ix + 1 >= g.nx || iy + 1 >= g.ny)
    fail(Errc::circle_outside, "interpolation point outside the grid");
  const int corners[4] = {g.idx(ix, iy), g.idx(ix + 1, iy), g.idx(ix, iy + 1), g.idx(ix + 1, iy + 1)};
  for (const int c : corners)
    if (m.is(c, CellTag::exterior))
      fail(Errc::circle_outside, "interpolation stencil touches exterior cells");
  return {g.idx(ix, iy), g.nx, gx - ix, gy - iy};
}

double bilerp(const std::vector<double>& plane, const Interp& p) {
  const auto i = static_cast<std::size_t>(p.i00);
  const auto nx = static_cast<std::size_t>(p.nx);
  const double a = plane[i] * (1 - p.fx) + plane[i + 1] * p.fx;
  const double b = plane[i + nx] * (1 - p.fx) + plane[i + nx + 1] * p.fx;
  return a * (1 - p.fy) + b * p.fy;
}

AntiSymTensor3 bilerp(const AntiSymField& f, const Interp& p) {
  return {bilerp(f.c[0], p), bilerp(f.c[1], p), bilerp(f.c[2], p)};
}

SymTensor3 bilerp(const TensorField& f, const Interp& p) {
  return {bilerp(f.c[0], p), bilerp(f.c[1], p), bilerp(f.c[2], p),
          bilerp(f.c[3], p), bilerp(f.c[4], p), bilerp(f.c[5], p)};
}

}  // namespace

DefectLocation locate_defect(const TensorField& field) {
  const DomainMask& m = *field.mask;
  const GridSpec& g = field.grid;
  const std::vector<double> dist = dist_to_p_field(field);

  int peak_cell = -1;
  double peak = -1.0;
  for (const int i : m.interior_cells) {
    if (dist[static_cast<std::size_t>(i)] > peak) {
      peak = dist[static_cast<std::size_t>(i)];
      peak_cell = i;
    }
  }

  DefectLocation loc;
  loc.peak = peak;
  if (peak_cell < 0 || peak < 0.1) {
    loc.status = DefectLocation::Status::no_defect;
    return loc;
  }

  // secondary local maxima signal contamination or non-convergence
  const int px = peak_cell % g.nx, py = peak_cell / g.nx;
  for (const int i : m.interior_cells) {
    const double v = dist[static_cast<std::size_t>(i)];
    if (v <= 0.5 * peak) continue;
    const int ix = i % g.nx, iy = i / g.nx;
    const double cell_dist = std::hypot(static_cast<double>(ix - px), static_cast<double>(iy - py));
    if (cell_dist <= 10.0) continue;
    bool is_local_max = true;
    for (int dy = -1; dy <= 1 && is_local_max; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int j = g.idx(ix + dx, iy + dy);
        if (!m.is(j, CellTag::exterior) && dist[static_cast<std::size_t>(j)] > v) {
          is_local_max = false;
          break;
        }
      }
    if (is_local_max) {
      loc.status = DefectLocation::Status::multiple_defects;
      loc.core = {g.cx(ix), g.cy(iy)};
      return loc;
    }
  }

  // quadratic refinement over the 3x3 neighborhood:
  // f ~ c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2 (least squares)
  double m00 = 0, m10 = 0, m01 = 0, m20 = 0, m02 = 0, m11 = 0;
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      const double f = dist[static_cast<std::size_t>(g.idx(px + dx, py + dy))];
      m00 += f;
      m10 += dx * f;
      m01 += dy * f;
      m20 += dx * dx * f;
      m02 += dy * dy * f;
      m11 += dx * dy * f;
    }
  const double c1 = m10 / 6.0, c2 = m01 / 6.0, c4 = m11 / 4.0;
  const double c3 = (-12.0 * m00 + 18.0 * m20) / 36.0;
  const double c5 = (-12.0 * m00 + 18.0 * m02) / 36.0;

  double ox = 0, oy = 0;
  const double det_h = 4.0 * c3 * c5 - c4 * c4;
  if (c3 < 0 && det_h > 0) {
    ox = -(2.0 * c5 * c1 - c4 * c2) / det_h;
    oy = -(2.0 * c3 * c2 - c4 * c1) / det_h;
    ox = std::clamp(ox, -1.0, 1.0);
    oy = std::clamp(oy, -1.0, 1.0);
  }
  loc.status = DefectLocation::Status::found;
  loc.core = {g.cx(px) + ox * g.h, g.cy(py) + oy * g.h};
  return loc;
}

AntiSymTensor3 circulation(const CurrentField& j, std::array<double, 2> center, double r) {
  const GridSpec& g = j.j1.grid;
  const DomainMask& m = *j.j1.mask;
  const double w = 2.0 * std::numbers::pi * r / kCircleNodes;
  AntiSymTensor3 lam;
  for (int k = 0; k < kCircleNodes; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kCircleNodes;
    const double tx = -std::sin(th), ty = std::cos(th);
    const Interp p = locate_interp(g, m, center[0] + r * std::cos(th), center[1] + r * std::sin(th));
    const AntiSymTensor3 jt = bilerp(j.j1, p) * tx + bilerp(j.j2, p) * ty;
    lam += jt * w;
  }
  return lam;  // stored antisymmetric by construction
}

AntiSymTensor3 circulation(const TensorField& field, std::array<double, 2> center, double r) {
  return circulation(current_field(field), center, r);
}

double pohozaev_xi(const FieldDerivs& d, std::array<double, 2> center, double r) {
  const GridSpec& g = d.dx.grid;
  const DomainMask& m = *d.dx.mask;
  const double w = 2.0 * std::numbers::pi * r / kCircleNodes;
  double acc = 0.0;
  for (int k = 0; k < kCircleNodes; ++k) {
    const double th = 2.0 * std::numbers::pi * k / kCircleNodes;
    const double nux = std::cos(th), nuy = std::sin(th);
    const Interp p = locate_interp(g, m, center[0] + r * nux, center[1] + r * nuy);
    const SymTensor3 ux = bilerp(d.dx, p);
    const SymTensor3 uy = bilerp(d.dy, p);
    const SymTensor3 un = ux * nux + uy * nuy;
    acc += (0.5 * (norm2(ux) + norm2(uy)) - norm2(un)) * w;
  }
  return r * acc;
}

double pohozaev_xi(const TensorField& field, std::array<double, 2> center, double r) {
  return pohozaev_xi(field_derivatives(field), center, r);
}

double potential_mass(const TensorField& field, double eps, const kern::PotentialSpec& pot) {
  return energy_with_potential_mass(field, eps, pot).second;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& eps_energy) {
  const std::size_t n = eps_energy.size();
  if (n < 3) fail(Errc::degenerate_fit, "scaling_fit: need at least 3 (eps, energy) samples");
  double sx = 0, sy = 0;
  for (const auto& [eps, e] : eps_energy) {
    if (eps <= 0) fail(Errc::degenerate_fit, "scaling_fit: eps must be positive");
    sx += -std::log(eps);
    sy += e;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [eps, e] : eps_energy) {
    const double dx = -std::log(eps) - mx;
    sxx += dx * dx;
    sxy += dx * (e - my);
  }
  if (sxx < 1e-18) fail(Errc::degenerate_fit, "scaling_fit: eps values are not distinct");
  ScalingFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (const auto& [eps, e] : eps_energy) {
    const double r = e - (f.slope * -std::log(eps) + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

DefectReport build_defect_report(const TensorField& field, double eps,
                                 std::array<double, 2> core, const std::vector<double>& radii) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      fail(Errc::invalid_input, "defect report radii must be strictly increasing");

  DefectReport rep;
  rep.core = core;
  rep.eps = eps;
  rep.energy = energy(field, eps);

  const std::vector<double> dist = dist_to_p_field(field);
  rep.peak_dist_to_p = *std::max_element(dist.begin(), dist.end());

  const CurrentField j = current_field(field);
  const FieldDerivs d = field_derivatives(field);
  for (const double r : radii) {
    rep.circulation_by_radius.emplace_back(r, circulation(j, core, r));
    rep.xi_by_radius.emplace_back(r, pohozaev_xi(d, core, r));
  }
  return rep;
}

void write_defect_report(const DefectReport& report, const std::string& path) {
  CsvWriter w(path);
  w.raw("eps,core_x,core_y,peak_dist,r,xi,lam_12,lam_13,lam_23,lam_norm");
  for (std::size_t i = 0; i < report.circulation_by_radius.size(); ++i) {
    const auto& [r, lam] = report.circulation_by_radius[i];
    w.field(report.eps);
    w.field(report.core[0]);
    w.field(report.core[1]);
    w.field(report.peak_dist_to_p);
    w.field(r);
    w.field(report.xi_by_radius[i].second);
    w.field(lam.a12);
    w.field(lam.a13);
    w.field(lam.a23);
    w.field(lam.norm());
    w.end_row();
  }
  if (!w.good()) fail(Errc::io_error, "failed writing defect report: " + path);
}

}  // namespace ldg
