#include "ldg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "ldg/error.hpp"

namespace ldg {

double DomainMask::cell_r(int i) const {
  const double dx = grid.cx(i % grid.nx) - center[0];
  const double dy = grid.cy(i / grid.nx) - center[1];
  return std::hypot(dx, dy);
}

double DomainMask::cell_theta(int i) const {
  const double dx = grid.cx(i % grid.nx) - center[0];
  const double dy = grid.cy(i / grid.nx) - center[1];
  return std::atan2(dy, dx);
}

namespace {

// Tags -> spans, edge spans, faces, ring. Shared by all constructors.
void build_structure(DomainMask& m) {
  const GridSpec& g = m.grid;
  m.interior_spans.clear();
  m.xedge_spans.clear();
  m.yedge_spans.clear();
  m.interior_cells.clear();
  m.faces.clear();
  m.boundary_ring.clear();

  auto tag_at = [&](int ix, int iy) { return m.tag[static_cast<std::size_t>(g.idx(ix, iy))]; };

  // interior spans; interior cells may not touch the grid edge
  for (int iy = 0; iy < g.ny; ++iy) {
    int x = 0;
    while (x < g.nx) {
      if (tag_at(x, iy) != CellTag::interior) {
        ++x;
        continue;
      }
      int b = x;
      while (x < g.nx && tag_at(x, iy) == CellTag::interior) ++x;
      if (b == 0 || x == g.nx || iy == 0 || iy == g.ny - 1)
        fail(Errc::invalid_geometry, "interior cells touch the grid edge");
      m.interior_spans.push_back({iy, b, x});
      for (int i = b; i < x; ++i) m.interior_cells.push_back(g.idx(i, iy));
    }
  }
  if (m.interior_cells.empty()) fail(Errc::too_coarse, "domain has no interior cells");

  // interior connectivity (single 4-connected component)
  {
    std::vector<char> seen(static_cast<std::size_t>(g.cells()), 0);
    std::queue<int> q;
    q.push(m.interior_cells.front());
    seen[static_cast<std::size_t>(m.interior_cells.front())] = 1;
    std::size_t reached = 0;
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      ++reached;
      const int nbr[4] = {i - 1, i + 1, i - g.nx, i + g.nx};
      for (int k = 0; k < 4; ++k) {
        const int j = nbr[k];
        if (m.tag[static_cast<std::size_t>(j)] == CellTag::interior && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          q.push(j);
        }
      }
    }
    if (reached != m.interior_cells.size())
      fail(Errc::invalid_geometry, "interior cells form more than one connected component");
  }

  // mask invariant: interior 4-neighborhoods contain no exterior cell
  for (const int i : m.interior_cells) {
    const int nbr[4] = {i - 1, i + 1, i - g.nx, i + g.nx};
    for (int k = 0; k < 4; ++k)
      if (m.tag[static_cast<std::size_t>(nbr[k])] == CellTag::exterior)
        fail(Errc::invalid_geometry, "interior cell touches an exterior cell");
  }

  // x-edges: every interior span [a,b) contributes left-cell indices [a-1, b)
  for (const Span& s : m.interior_spans) m.xedge_spans.push_back({s.y, s.begin - 1, s.end});

  // y-edges between rows y and y+1: union of the interior x-ranges of the
  // two rows (all such edges connect non-exterior cells, at least one interior)
  {
    std::vector<std::vector<std::pair<int, int>>> by_row(static_cast<std::size_t>(g.ny));
    for (const Span& s : m.interior_spans) by_row[static_cast<std::size_t>(s.y)].push_back({s.begin, s.end});
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
      std::vector<std::pair<int, int>> merged = by_row[static_cast<std::size_t>(iy)];
      for (const auto& r : by_row[static_cast<std::size_t>(iy + 1)]) merged.push_back(r);
      if (merged.empty()) continue;
      std::sort(merged.begin(), merged.end());
      int cb = merged[0].first, ce = merged[0].second;
      for (std::size_t k = 1; k < merged.size(); ++k) {
        if (merged[k].first <= ce) {
          ce = std::max(ce, merged[k].second);
        } else {
          m.yedge_spans.push_back({iy, cb, ce});
          cb = merged[k].first;
          ce = merged[k].second;
        }
      }
      m.yedge_spans.push_back({iy, cb, ce});
    }
  }

  // interior-boundary faces
  for (const int i : m.interior_cells) {
    const int ix = i % g.nx, iy = i / g.nx;
    struct N { int j; double nux, nuy; };
    const N nbr[4] = {{g.idx(ix - 1, iy), -1, 0}, {g.idx(ix + 1, iy), 1, 0},
                      {g.idx(ix, iy - 1), 0, -1}, {g.idx(ix, iy + 1), 0, 1}};
    for (const N& n : nbr)
      if (m.tag[static_cast<std::size_t>(n.j)] == CellTag::boundary)
        m.faces.push_back({i, n.j, n.nux, n.nuy});
  }

  // boundary ring ordered by angle
  for (int i = 0; i < g.cells(); ++i)
    if (m.tag[static_cast<std::size_t>(i)] == CellTag::boundary) m.boundary_ring.push_back(i);
  std::sort(m.boundary_ring.begin(), m.boundary_ring.end(),
            [&](int a, int b) { return m.cell_theta(a) < m.cell_theta(b); });

  m.bval.assign(static_cast<std::size_t>(g.cells()), SymTensor3{});
}

DomainMask from_predicate_impl(int n, double box_half,
                               const std::function<bool(double, double)>& inside,
                               std::array<double, 2> center, double radius) {
  if (n < 16) fail(Errc::too_coarse, "grid needs at least 16 cells per side");
  if (box_half <= 0) fail(Errc::invalid_geometry, "box_half must be positive");

  DomainMask m;
  m.grid.nx = m.grid.ny = n;
  m.grid.h = 2.0 * box_half / n;
  m.grid.origin = {-box_half, -box_half};
  m.center = center;
  m.radius = radius;
  m.tag.assign(static_cast<std::size_t>(m.grid.cells()), CellTag::exterior);

  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      if (inside(m.grid.cx(ix), m.grid.cy(iy)))
        m.tag[static_cast<std::size_t>(m.grid.idx(ix, iy))] = CellTag::interior;

  // nearest outside neighbors become the boundary ring
  std::vector<int> to_boundary;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int i = m.grid.idx(ix, iy);
      if (m.tag[static_cast<std::size_t>(i)] != CellTag::interior) continue;
      const int nbr[4] = {i - 1, i + 1, i - n, i + n};
      const bool edge = ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1;
      if (edge) fail(Errc::invalid_geometry, "domain touches the grid edge");
      for (int k = 0; k < 4; ++k)
        if (m.tag[static_cast<std::size_t>(nbr[k])] == CellTag::exterior) to_boundary.push_back(nbr[k]);
    }
  for (const int i : to_boundary) m.tag[static_cast<std::size_t>(i)] = CellTag::boundary;

  build_structure(m);
  return m;
}

}  // namespace

DomainMask make_disk_domain(int n, double radius, double box_half) {
  if (radius <= 0) fail(Errc::invalid_geometry, "disk radius must be positive");
  const double h = 2.0 * box_half / n;
  if (radius + h > box_half)
    fail(Errc::invalid_geometry, "disk plus boundary ring does not fit inside the grid box");
  return from_predicate_impl(
      n, box_half,
      [radius, h](double x, double y) { return std::hypot(x, y) < radius - 0.5 * h; }, {0.0, 0.0},
      radius);
}

DomainMask make_domain_from_predicate(int n, double box_half,
                                      const std::function<bool(double, double)>& inside,
                                      std::array<double, 2> center, double radius) {
  return from_predicate_impl(n, box_half, inside, center, radius);
}

void rebuild_mask_structure(DomainMask& mask) { build_structure(mask); }

DomainMask apply_boundary(const DomainMask& mask, const BoundaryData& bd) {
  if (bd.winding % 2 == 0)
    fail(Errc::even_winding, "boundary winding must be odd (non-contractible)");
  DomainMask out = mask;
  for (const int i : out.boundary_ring) {
    const SymTensor3 g = bd.trace(out.cell_theta(i));
    out.bval[static_cast<std::size_t>(i)] = g;
  }
  out.boundary_applied = true;
  out.bd = bd;
  return out;
}

TensorField initial_field(const DomainMask& mask, InitMode mode, std::uint64_t seed,
                          const TensorField* snapshot) {
  if (!mask.boundary_applied)
    fail(Errc::invalid_input, "initial_field: boundary trace not applied to mask");

  TensorField f;
  f.grid = mask.grid;
  f.mask = std::make_shared<DomainMask>(mask);
  f.allocate();

  const SymTensor3 iso = SymTensor3::isotropic();
  for (int i = 0; i < f.grid.cells(); ++i) f.set(i, iso);
  for (const int i : mask.boundary_ring) f.set_trace1(i, mask.bval[static_cast<std::size_t>(i)]);

  if (mode == InitMode::snapshot) {
    if (snapshot == nullptr) fail(Errc::invalid_input, "initial_field: snapshot mode needs a field");
    if (!snapshot->grid.same_shape(mask.grid))
      fail(Errc::snapshot_mismatch, "initial_field: snapshot grid shape differs from mask");
    for (int i = 0; i < f.grid.cells(); ++i) {
      if (snapshot->mask && !mask.tag.empty() &&
          snapshot->mask->tag[static_cast<std::size_t>(i)] != mask.tag[static_cast<std::size_t>(i)])
        fail(Errc::snapshot_mismatch, "initial_field: snapshot mask tags differ");
    }
    for (const int i : mask.interior_cells) f.set_trace1(i, snapshot->at(i));
    return f;
  }

  const BoundaryData& bd = *mask.bd;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);

  for (const int i : mask.interior_cells) {
    const double r = mask.cell_r(i);
    const double s = std::min(r / mask.radius, 1.0);
    const SymTensor3 g = bd.trace(mask.cell_theta(i));
    SymTensor3 u = s * g + (1.0 - s) * iso;
    if (mode == InitMode::random) {
      const double amp = 1.0 - s;
      SymTensor3 n;
      n.xx = amp * noise(rng);
      n.yy = amp * noise(rng);
      n.xy = amp * noise(rng);
      n.xz = amp * noise(rng);
      n.yz = amp * noise(rng);
      n.zz = -(n.xx + n.yy);
      u += n;
    }
    f.set_trace1(i, u);
  }
  return f;
}

}  // namespace ldg
