#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ldg/error.hpp"
#include "ldg/solve.hpp"

using namespace ldg;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io_error;
}

SolveConfig quick_config(double eps) {
  SolveConfig c;
  c.eps = eps;
  c.rel_tol = 1e-3;
  c.max_iters = 60000;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  SolveConfig c;
  c.eps = -1;
  CHECK(code_of([&] { c.validate(); }) == Errc::invalid_input);
  c = SolveConfig{};
  c.rel_tol = 0.5;
  CHECK(code_of([&] { c.validate(); }) == Errc::invalid_input);
  c = SolveConfig{};
  c.continuation = {0.2, 0.2};
  CHECK(code_of([&] { c.validate(); }) == Errc::invalid_input);
  c.continuation = {0.2, 0.1};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("step at a constant minimum leaves the field unchanged") {
  const DomainMask m = apply_boundary(make_disk_domain(24, 1.0), BoundaryData{});
  TensorField f = initial_field(m, InitMode::radial_melt);
  const SymTensor3 p = geodesic_gamma0(0.4);
  for (int i = 0; i < m.grid.cells(); ++i) f.set(i, p);

  const TensorField before = f;
  double dt = 1e-4;
  double e = std::numeric_limits<double>::quiet_NaN();
  CHECK(step(f, 0.3, dt, kern::PotentialSpec::eq2(), &e));
  for (int k = 0; k < 6; ++k) CHECK(f.c[k] == before.c[k]);
}

TEST_CASE("accepted steps never increase the energy") {
  const DomainMask m = apply_boundary(make_disk_domain(32, 1.0), BoundaryData{});
  TensorField f = initial_field(m, InitMode::radial_melt);
  const double eps = 0.3;
  double dt = SolveConfig{}.initial_dt(f.grid.h);
  double e = energy(f, eps);
  const double e0 = e;
  for (int it = 0; it < 50; ++it) {
    const double prev = e;
    step(f, eps, dt, kern::PotentialSpec::eq2(), &e);
    CHECK(e <= prev);
  }
  CHECK(e < e0);  // strict decrease away from the minimum
}

TEST_CASE("solve on a small disk") {
  const DomainMask m = make_disk_domain(48, 1.0);
  const SolveConfig cfg = quick_config(0.3);
  const SolveResult res = solve(m, BoundaryData{}, cfg);

  CHECK(res.converged);
  CHECK(res.final_eps == 0.3);

  // monotone recorded trace
  for (std::size_t i = 1; i < res.energy_trace.size(); ++i)
    CHECK(res.energy_trace[i].energy <= res.energy_trace[i - 1].energy);

  // Sigma confinement without projection, and |u| <= 1
  const FieldBounds b = field_bounds(res.field);
  CHECK(b.min_eig >= -1e-6);
  CHECK(b.max_eig <= 1.0 + 1e-6);
  CHECK(b.max_norm <= 1.0 + 1e-6);

  // boundary cells stay bitwise fixed
  const DomainMask with_bc = apply_boundary(m, BoundaryData{});
  const TensorField init = initial_field(with_bc, InitMode::radial_melt);
  for (const int bc : with_bc.boundary_ring)
    for (int k = 0; k < 6; ++k)
      CHECK(res.field.c[k][static_cast<std::size_t>(bc)] == init.c[k][static_cast<std::size_t>(bc)]);

  // exact trace pinning after many steps
  for (const int i : with_bc.interior_cells)
    CHECK(std::abs(res.field.at(i).trace() - 1.0) < 1e-14);

  // determinism: identical run
  const SolveResult res2 = solve(m, BoundaryData{}, cfg);
  CHECK(res2.iterations == res.iterations);
  for (int k = 0; k < 6; ++k) CHECK(res2.field.c[k] == res.field.c[k]);
}

TEST_CASE("solve with sigma projection stays feasible and monotone") {
  const DomainMask m = make_disk_domain(32, 1.0);
  SolveConfig cfg = quick_config(0.3);
  cfg.sigma_projection = true;
  cfg.max_iters = 3000;
  const SolveResult res = solve(m, BoundaryData{}, cfg);
  for (std::size_t i = 1; i < res.energy_trace.size(); ++i)
    CHECK(res.energy_trace[i].energy <= res.energy_trace[i - 1].energy);
  const FieldBounds b = field_bounds(res.field);
  CHECK(b.min_eig >= -1e-12);
}

TEST_CASE("constant boundary data relaxes to the constant field") {
  // synthetic constant-P boundary (not realizable through apply_boundary,
  // which guards even windings)
  DomainMask m = apply_boundary(make_disk_domain(32, 1.0), BoundaryData{});
  const SymTensor3 p = geodesic_gamma0(0.9);
  for (const int b : m.boundary_ring) m.bval[static_cast<std::size_t>(b)] = p;

  TensorField init;
  init.grid = m.grid;
  init.mask = std::make_shared<DomainMask>(m);
  init.allocate();
  for (int i = 0; i < m.grid.cells(); ++i) init.set(i, SymTensor3::isotropic());
  for (const int b : m.boundary_ring) init.set_trace1(b, p);

  SolveConfig cfg = quick_config(0.4);
  const double e0 = energy(init, cfg.eps);
  const SolveResult res = solve(init, cfg);
  CHECK(res.converged);
  CHECK(res.energy_trace.back().energy < 0.02 * e0);
  double worst = 0;
  for (const int i : m.interior_cells) worst = std::max(worst, norm(res.field.at(i) - p));
  CHECK(worst < 0.05);
}

TEST_CASE("continuation sweep warm start") {
  const DomainMask m = make_disk_domain(48, 1.0);
  SolveConfig cfg = quick_config(0.3);
  cfg.continuation = {0.3, 0.15};
  const auto sweep = continuation_sweep(m, BoundaryData{}, cfg);
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].converged);
  CHECK(sweep[1].converged);

  // energy grows as eps shrinks
  CHECK(sweep[1].energy_trace.back().energy > sweep[0].energy_trace.back().energy);

  // warm start beats a cold start at the smaller eps
  SolveConfig cold = quick_config(0.15);
  const SolveResult cold_res = solve(m, BoundaryData{}, cold);
  CHECK(sweep[1].iterations < cold_res.iterations);

  // single-element list reduces to solve
  SolveConfig single = quick_config(0.3);
  single.continuation = {0.3};
  const auto one = continuation_sweep(m, BoundaryData{}, single);
  REQUIRE(one.size() == 1);
  CHECK(one[0].energy_trace.back().energy == solve(m, BoundaryData{}, quick_config(0.3)).energy_trace.back().energy);
}

TEST_CASE("stalled step is reported") {
  const DomainMask m = make_disk_domain(24, 1.0);
  SolveConfig cfg = quick_config(0.3);
  cfg.dt = 1e9;  // every attempt overshoots; halving runs into the floor
  CHECK(code_of([&] { solve(m, BoundaryData{}, cfg); }) == Errc::stalled_step);
}

TEST_CASE("non-finite input is rejected") {
  const DomainMask m = apply_boundary(make_disk_domain(24, 1.0), BoundaryData{});
  TensorField f = initial_field(m, InitMode::radial_melt);
  f.c[1][static_cast<std::size_t>(m.interior_cells[10])] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { solve(f, quick_config(0.3)); }) == Errc::non_finite);
}

TEST_CASE("beta potentials also confine without projection") {
  const DomainMask m = make_disk_domain(32, 1.0);
  for (const double beta : {3.0, 5.5}) {
    SolveConfig cfg = quick_config(0.35);
    cfg.potential = kern::PotentialSpec::wbeta(beta);
    cfg.max_iters = 30000;
    const SolveResult res = solve(m, BoundaryData{}, cfg);
    const FieldBounds b = field_bounds(res.field);
    CHECK(b.min_eig >= -1e-6);
    CHECK(b.max_norm <= 1.0 + 1e-6);
  }
}
