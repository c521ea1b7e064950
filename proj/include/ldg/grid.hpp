#pragma once

// Masked uniform grid over a planar box, with cell tags, fixed boundary
// traces, and the precomputed span/edge/face structure the kernels and the
// Neumann solver consume.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ldg/projective.hpp"
#include "ldg/tensor.hpp"

namespace ldg {

struct GridSpec {
  int nx = 0, ny = 0;
  double h = 0.0;
  std::array<double, 2> origin{};  // lower-left corner of the box

  int cells() const { return nx * ny; }
  int idx(int ix, int iy) const { return iy * nx + ix; }
  double cx(int ix) const { return origin[0] + (ix + 0.5) * h; }
  double cy(int iy) const { return origin[1] + (iy + 0.5) * h; }
  bool same_shape(const GridSpec& o) const { return nx == o.nx && ny == o.ny && h == o.h; }
};

enum class CellTag : std::uint8_t { exterior = 0, interior = 1, boundary = 2 };

// Non-contractible boundary trace g(theta) = R gamma0(k theta + phase) R^T.
struct BoundaryData {
  int winding = 1;  // odd
  Mat3 frame = Mat3::identity();
  double phase = 0.0;

  SymTensor3 trace(double theta) const {
    return conjugate(frame, geodesic_gamma0(winding * theta + phase));
  }
};

// Contiguous run of cells [begin, end) in row y; used for interior cells and
// for the two edge families of the discrete Dirichlet energy.
struct Span {
  int y = 0, begin = 0, end = 0;
};

// Face between an interior cell and a boundary cell; nu is the outward normal.
struct BoundaryFace {
  int cell = 0, bcell = 0;
  double nux = 0, nuy = 0;
};

struct DomainMask {
  GridSpec grid;
  std::vector<CellTag> tag;
  std::array<double, 2> center{0, 0};
  double radius = 0.0;

  std::vector<Span> interior_spans;
  std::vector<Span> xedge_spans;  // edge = (i, i+1), index of the left cell
  std::vector<Span> yedge_spans;  // edge = (i, i+nx), index of the lower cell
  std::vector<int> interior_cells;
  std::vector<BoundaryFace> faces;
  std::vector<int> boundary_ring;  // boundary cells ordered by angle about center
  std::vector<SymTensor3> bval;    // fixed boundary values (meaningful at boundary cells)
  bool boundary_applied = false;
  std::optional<BoundaryData> bd;

  bool is(int i, CellTag t) const { return tag[static_cast<std::size_t>(i)] == t; }
  int interior_count() const { return static_cast<int>(interior_cells.size()); }
  double cell_r(int i) const;      // distance of cell center from `center`
  double cell_theta(int i) const;  // angle of cell center about `center`
};

// Disk of the given radius centered in the box [-box_half, box_half]^2 with
// n cells per side. The ring of nearest outside neighbors is tagged boundary.
DomainMask make_disk_domain(int n, double radius, double box_half = 1.25);

// General masked domain from an inside-predicate over cell centers.
DomainMask make_domain_from_predicate(int n, double box_half,
                                      const std::function<bool(double, double)>& inside,
                                      std::array<double, 2> center, double radius);

// Recompute spans, edge ranges, faces, and the boundary ring from the tag
// array (resets bval). Used when a mask is reconstructed from a snapshot.
void rebuild_mask_structure(DomainMask& mask);

// Evaluate the trace on every boundary cell at its angular coordinate.
DomainMask apply_boundary(const DomainMask& mask, const BoundaryData& bd);

enum class InitMode { radial_melt, random, snapshot };

struct TensorField {
  GridSpec grid;
  std::shared_ptr<const DomainMask> mask;
  // Structure-of-arrays component planes: xx, xy, xz, yy, yz, zz.
  std::array<std::vector<double>, 6> c;

  SymTensor3 at(int i) const {
    const auto s = static_cast<std::size_t>(i);
    return {c[0][s], c[1][s], c[2][s], c[3][s], c[4][s], c[5][s]};
  }
  SymTensor3 at(int ix, int iy) const { return at(grid.idx(ix, iy)); }
  void set(int i, const SymTensor3& t) {
    const auto s = static_cast<std::size_t>(i);
    c[0][s] = t.xx; c[1][s] = t.xy; c[2][s] = t.xz;
    c[3][s] = t.yy; c[4][s] = t.yz; c[5][s] = t.zz;
  }
  // Pin the trace exactly: zz := 1 - xx - yy.
  void set_trace1(int i, const SymTensor3& t) {
    set(i, t);
    const auto s = static_cast<std::size_t>(i);
    c[5][s] = 1.0 - c[0][s] - c[3][s];
  }
  void allocate() {
    for (auto& plane : c) plane.assign(static_cast<std::size_t>(grid.cells()), 0.0);
  }
};

TensorField initial_field(const DomainMask& mask, InitMode mode, std::uint64_t seed = 0,
                          const TensorField* snapshot = nullptr);

// Per-cell antisymmetric companion field (currents, psi).
struct AntiSymField {
  GridSpec grid;
  std::shared_ptr<const DomainMask> mask;
  std::array<std::vector<double>, 3> c;  // a12, a13, a23

  AntiSymTensor3 at(int i) const {
    const auto s = static_cast<std::size_t>(i);
    return {c[0][s], c[1][s], c[2][s]};
  }
  void set(int i, const AntiSymTensor3& t) {
    const auto s = static_cast<std::size_t>(i);
    c[0][s] = t.a12; c[1][s] = t.a13; c[2][s] = t.a23;
  }
  void allocate() {
    for (auto& plane : c) plane.assign(static_cast<std::size_t>(grid.cells()), 0.0);
  }
};

}  // namespace ldg
