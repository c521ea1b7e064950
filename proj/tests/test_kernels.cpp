#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldg/field_ops.hpp"
#include "ldg/grid.hpp"
#include "ldg/kernels.hpp"

using namespace ldg;

namespace {

TensorField test_field(int n, std::uint64_t seed) {
  const DomainMask m = apply_boundary(make_disk_domain(n, 1.0), BoundaryData{});
  return initial_field(m, InitMode::random, seed);
}

}  // namespace

TEST_CASE("scalar and AVX2 map kernels agree bitwise") {
  if (!kern::avx2_supported()) {
    MESSAGE("AVX2 unavailable; skipping backend equivalence");
    return;
  }
  for (const int n : {24, 48, 96}) {  // span lengths exercise every tail size
    const TensorField u = test_field(n, 1234 + n);
    const double inv_h2 = 1.0 / (u.grid.h * u.grid.h);
    for (const auto pot : {kern::PotentialSpec::eq2(), kern::PotentialSpec::wbeta(3.0)}) {
      TensorField gs = u, gv = u;
      for (auto& p : gs.c) std::fill(p.begin(), p.end(), 0.0);
      for (auto& p : gv.c) std::fill(p.begin(), p.end(), 0.0);
      kern::scalar::grad(u, pot, 16.0, inv_h2, gs);
      kern::avx2::grad(u, pot, 16.0, inv_h2, gv);
      for (int k = 0; k < 6; ++k) CHECK(gs.c[k] == gv.c[k]);

      TensorField os = u, ov = u;
      kern::scalar::step_into(u, gs, 1.7e-4, os);
      kern::avx2::step_into(u, gv, 1.7e-4, ov);
      for (int k = 0; k < 6; ++k) CHECK(os.c[k] == ov.c[k]);
    }
  }
}

TEST_CASE("energy reductions agree across backends to rounding") {
  if (!kern::avx2_supported()) {
    MESSAGE("AVX2 unavailable; skipping backend equivalence");
    return;
  }
  for (const int n : {24, 48, 96}) {
    const TensorField u = test_field(n, 99 + n);
    for (const auto pot : {kern::PotentialSpec::eq2(), kern::PotentialSpec::wbeta(5.5)}) {
      const kern::EnergyParts a = kern::scalar::energy(u, pot);
      const kern::EnergyParts b = kern::avx2::energy(u, pot);
      CHECK(std::abs(a.dirichlet - b.dirichlet) <= 1e-12 * std::max(1.0, std::abs(a.dirichlet)));
      CHECK(std::abs(a.wsum - b.wsum) <= 1e-12 * std::max(1.0, std::abs(a.wsum)));
    }
  }
}

TEST_CASE("kernels are deterministic for a fixed input") {
  const TensorField u = test_field(48, 5);
  const kern::PotentialSpec pot = kern::PotentialSpec::eq2();
  const kern::EnergyParts a = kern::energy(u, pot);
  const kern::EnergyParts b = kern::energy(u, pot);
  CHECK(a.dirichlet == b.dirichlet);
  CHECK(a.wsum == b.wsum);

  TensorField g1 = u, g2 = u;
  kern::grad(u, pot, 9.0, 100.0, g1);
  kern::grad(u, pot, 9.0, 100.0, g2);
  for (int k = 0; k < 6; ++k) CHECK(g1.c[k] == g2.c[k]);
}

TEST_CASE("backend selection") {
  kern::reset_auto();
  if (kern::avx2_supported()) {
    kern::force(kern::Backend::avx2);
    CHECK(kern::active() == kern::Backend::avx2);
  }
  kern::force(kern::Backend::scalar);
  CHECK(kern::active() == kern::Backend::scalar);
  CHECK(std::string(kern::backend_name()) == "scalar");
  kern::reset_auto();
}

TEST_CASE("gradient kernel honors the interior mask") {
  const TensorField u = test_field(32, 8);
  TensorField g = u;
  for (auto& p : g.c) std::fill(p.begin(), p.end(), 0.0);
  kern::grad(u, kern::PotentialSpec::eq2(), 4.0, 1.0 / (u.grid.h * u.grid.h), g);
  const DomainMask& m = *u.mask;
  for (int i = 0; i < u.grid.cells(); ++i)
    if (!m.is(i, CellTag::interior)) CHECK(norm(g.at(i)) == 0.0);
}
