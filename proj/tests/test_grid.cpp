#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "ldg/error.hpp"
#include "ldg/grid.hpp"
#include "ldg/snapshot.hpp"

using namespace ldg;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;  // sentinel for "did not throw"
}

}  // namespace

TEST_CASE("disk domain geometry") {
  const DomainMask m = make_disk_domain(64, 1.0);
  const double h = m.grid.h;
  CHECK(h == doctest::Approx(2.5 / 64));

  // interior cell count tracks the disk area
  const double expected = std::numbers::pi / (h * h);
  CHECK(std::abs(m.interior_count() - expected) / expected < 0.05);

  // interior 4-neighborhoods never touch exterior directly
  for (const int i : m.interior_cells) {
    const int nbr[4] = {i - 1, i + 1, i - m.grid.nx, i + m.grid.nx};
    for (const int j : nbr) CHECK(!m.is(j, CellTag::exterior));
  }

  // every boundary cell touches an interior cell
  for (const int b : m.boundary_ring) {
    const int nbr[4] = {b - 1, b + 1, b - m.grid.nx, b + m.grid.nx};
    bool touches = false;
    for (const int j : nbr) touches = touches || m.is(j, CellTag::interior);
    CHECK(touches);
  }
}

TEST_CASE("disk domain edge cases") {
  CHECK_NOTHROW(make_disk_domain(16, 1.0));  // smallest allowed grid
  CHECK(code_of([] { make_disk_domain(15, 1.0); }) == Errc::too_coarse);
  CHECK(code_of([] { make_disk_domain(64, 1.3); }) == Errc::invalid_geometry);
  CHECK(code_of([] { make_disk_domain(64, -1.0); }) == Errc::invalid_geometry);
}

TEST_CASE("boundary application") {
  const DomainMask base = make_disk_domain(48, 1.0);

  BoundaryData bd;
  bd.winding = 2;
  CHECK(code_of([&] { apply_boundary(base, bd); }) == Errc::even_winding);

  bd.winding = 1;
  bd.phase = 0.0;
  const DomainMask m = apply_boundary(base, bd);
  CHECK(m.boundary_applied);
  CHECK(norm(bd.trace(0.0) - SymTensor3::diag(1, 0, 0)) < 1e-15);

  for (const int b : m.boundary_ring) {
    const SymTensor3 g = m.bval[static_cast<std::size_t>(b)];
    // idempotent, trace-1, and exactly the trace evaluated at the cell angle
    CHECK(norm(square(g) - g) < 1e-12);
    CHECK(g.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(norm(g - bd.trace(m.cell_theta(b))) == 0.0);
  }

  // phase pi sends theta=0 to gamma0(pi) = diag(0,1,0)
  BoundaryData bd_pi = bd;
  bd_pi.phase = std::numbers::pi;
  CHECK(norm(bd_pi.trace(0.0) - SymTensor3::diag(0, 1, 0)) < 1e-14);
}

TEST_CASE("initial fields") {
  const DomainMask m = apply_boundary(make_disk_domain(48, 1.0), BoundaryData{});
  const double h = m.grid.h;

  const TensorField melt = initial_field(m, InitMode::radial_melt);
  // melt core: the cell nearest the center is essentially isotropic
  int center = -1;
  double best = 1e300;
  for (const int i : m.interior_cells) {
    if (m.cell_r(i) < best) {
      best = m.cell_r(i);
      center = i;
    }
  }
  CHECK(norm(melt.at(center) - SymTensor3::isotropic()) < h);

  // boundary-adjacent interior cells sit within 2h-Lipschitz of the trace
  for (const BoundaryFace& f : m.faces) {
    const SymTensor3 u = melt.at(f.cell);
    const SymTensor3 g = m.bd->trace(m.cell_theta(f.cell));
    CHECK(norm(u - g) < 2.0 * h);
  }

  // exact trace pinning everywhere
  for (int i = 0; i < m.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    CHECK(std::abs(melt.at(i).trace() - 1.0) < 1e-15);
  }

  // deterministic random mode
  const TensorField r1 = initial_field(m, InitMode::random, 9001);
  const TensorField r2 = initial_field(m, InitMode::random, 9001);
  const TensorField r3 = initial_field(m, InitMode::random, 9002);
  for (int k = 0; k < 6; ++k) CHECK(r1.c[k] == r2.c[k]);
  bool differs = false;
  for (int k = 0; k < 6; ++k) differs = differs || r1.c[k] != r3.c[k];
  CHECK(differs);

  // boundary cells hold the trace in every mode
  for (const int b : m.boundary_ring)
    CHECK(norm(r1.at(b) - m.bval[static_cast<std::size_t>(b)]) < 1e-15);
}

TEST_CASE("snapshot round trip is bitwise") {
  const DomainMask m = apply_boundary(make_disk_domain(32, 1.0), BoundaryData{});
  const TensorField f = initial_field(m, InitMode::random, 7);

  const std::string path = (std::filesystem::temp_directory_path() / "ldg_snap_test.csv").string();
  write_snapshot(f, path);
  const TensorField g = load_snapshot(path);

  CHECK(g.mask->interior_count() == m.interior_count());
  // compare values cell by cell through coordinates
  int compared = 0;
  for (int i = 0; i < m.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    const double x = m.grid.cx(i % m.grid.nx), y = m.grid.cy(i / m.grid.nx);
    // locate in the reloaded grid
    const GridSpec& gg = g.grid;
    const int ix = static_cast<int>(std::lround((x - gg.origin[0]) / gg.h - 0.5));
    const int iy = static_cast<int>(std::lround((y - gg.origin[1]) / gg.h - 0.5));
    const int j = gg.idx(ix, iy);
    CHECK(g.mask->tag[static_cast<std::size_t>(j)] == m.tag[static_cast<std::size_t>(i)]);
    const SymTensor3 a = f.at(i), b = g.at(j);
    CHECK(a.xx == b.xx);
    CHECK(a.xy == b.xy);
    CHECK(a.xz == b.xz);
    CHECK(a.yy == b.yy);
    CHECK(a.yz == b.yz);
    CHECK(a.zz == b.zz);
    ++compared;
  }
  CHECK(compared == m.interior_count() + static_cast<int>(m.boundary_ring.size()));
  std::filesystem::remove(path);
}

TEST_CASE("snapshot failure modes") {
  const std::string path = (std::filesystem::temp_directory_path() / "ldg_snap_bad.csv").string();
  {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    std::fputs("x,y,tag\n", fp);
    std::fclose(fp);
  }
  CHECK(code_of([&] { load_snapshot(path); }) == Errc::io_error);
  {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    std::fputs(kSnapshotHeader, fp);
    std::fputs("\n0.1,0.1,interior,1,0,0\n", fp);  // truncated row
    std::fclose(fp);
  }
  CHECK(code_of([&] { load_snapshot(path); }) == Errc::io_error);
  std::filesystem::remove(path);
}

TEST_CASE("snapshot init requires matching shapes") {
  const DomainMask m48 = apply_boundary(make_disk_domain(48, 1.0), BoundaryData{});
  const DomainMask m32 = apply_boundary(make_disk_domain(32, 1.0), BoundaryData{});
  const TensorField f48 = initial_field(m48, InitMode::radial_melt);
  CHECK(code_of([&] { initial_field(m32, InitMode::snapshot, 0, &f48); }) ==
        Errc::snapshot_mismatch);
  CHECK_NOTHROW(initial_field(m48, InitMode::snapshot, 0, &f48));
}

TEST_CASE("annulus mask through the predicate constructor") {
  const double r0 = 0.4;
  const DomainMask m = make_domain_from_predicate(
      64, 1.25, [r0](double x, double y) { return std::hypot(x, y) < 1.0 && std::hypot(x, y) > r0; },
      {0, 0}, 1.0);
  CHECK(m.interior_count() > 0);
  const double h = m.grid.h;
  const double expected = std::numbers::pi * (1.0 - r0 * r0) / (h * h);
  CHECK(std::abs(m.interior_count() - expected) / expected < 0.1);
}
