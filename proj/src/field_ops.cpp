#include "ldg/field_ops.hpp"

#include <algorithm>
#include <cmath>

#include "ldg/error.hpp"

namespace ldg {

double energy(const TensorField& field, double eps, const kern::PotentialSpec& pot) {
  return energy_with_potential_mass(field, eps, pot).first;
}

std::pair<double, double> energy_with_potential_mass(const TensorField& field, double eps,
                                                     const kern::PotentialSpec& pot) {
  if (eps <= 0) fail(Errc::invalid_input, "energy: eps must be positive");
  const kern::EnergyParts parts = kern::energy(field, pot);
  const double h = field.grid.h;
  const double pm = parts.wsum * h * h / (eps * eps);
  return {parts.dirichlet + pm, pm};
}

TensorField energy_gradient(const TensorField& field, double eps, const kern::PotentialSpec& pot) {
  if (eps <= 0) fail(Errc::invalid_input, "energy_gradient: eps must be positive");
  TensorField g;
  g.grid = field.grid;
  g.mask = field.mask;
  g.allocate();
  const double h = field.grid.h;
  kern::grad(field, pot, 1.0 / (eps * eps), 1.0 / (h * h), g);
  return g;
}

namespace {

// One derivative sample along +/-d, centered when possible.
inline SymTensor3 deriv_cell(const TensorField& f, int i, int d, double h) {
  const DomainMask& m = *f.mask;
  const bool has_m = !m.is(i - d, CellTag::exterior);
  const bool has_p = !m.is(i + d, CellTag::exterior);
  if (has_m && has_p) return (f.at(i + d) - f.at(i - d)) * (1.0 / (2.0 * h));
  if (has_p) return (f.at(i + d) - f.at(i)) * (1.0 / h);
  if (has_m) return (f.at(i) - f.at(i - d)) * (1.0 / h);
  return SymTensor3{};
}

inline AntiSymTensor3 deriv_cell(const AntiSymField& f, int i, int d, double h) {
  const DomainMask& m = *f.mask;
  const bool has_m = !m.is(i - d, CellTag::exterior);
  const bool has_p = !m.is(i + d, CellTag::exterior);
  if (has_m && has_p) return (f.at(i + d) - f.at(i - d)) * (1.0 / (2.0 * h));
  if (has_p) return (f.at(i + d) - f.at(i)) * (1.0 / h);
  if (has_m) return (f.at(i) - f.at(i - d)) * (1.0 / h);
  return AntiSymTensor3{};
}

}  // namespace

FieldDerivs field_derivatives(const TensorField& field) {
  const DomainMask& m = *field.mask;
  const int nx = field.grid.nx;
  const double h = field.grid.h;
  FieldDerivs d;
  d.dx.grid = d.dy.grid = field.grid;
  d.dx.mask = d.dy.mask = field.mask;
  d.dx.allocate();
  d.dy.allocate();
  for (int i = 0; i < field.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    // grid-edge cells can only appear as boundary; their missing neighbors
    // read as exterior because the margin ring is exterior by construction
    d.dx.set(i, deriv_cell(field, i, 1, h));
    d.dy.set(i, deriv_cell(field, i, nx, h));
  }
  return d;
}

CurrentField current_field(const TensorField& field) {
  const DomainMask& m = *field.mask;
  const int nx = field.grid.nx;
  const double h = field.grid.h;
  CurrentField j;
  j.j1.grid = j.j2.grid = field.grid;
  j.j1.mask = j.j2.mask = field.mask;
  j.j1.allocate();
  j.j2.allocate();
  for (int i = 0; i < field.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    const SymTensor3 u = field.at(i);
    j.j1.set(i, commutator(u, deriv_cell(field, i, 1, h)));
    j.j2.set(i, commutator(u, deriv_cell(field, i, nx, h)));
  }
  return j;
}

DivCurl div_and_curl(const AntiSymField& f1, const AntiSymField& f2) {
  const DomainMask& m = *f1.mask;
  const int nx = f1.grid.nx;
  const double h = f1.grid.h;
  DivCurl out;
  out.div.grid = out.curl.grid = f1.grid;
  out.div.mask = out.curl.mask = f1.mask;
  out.div.allocate();
  out.curl.allocate();
  for (const int i : m.interior_cells) {
    const AntiSymTensor3 d1dx = deriv_cell(f1, i, 1, h);
    const AntiSymTensor3 d1dy = deriv_cell(f1, i, nx, h);
    const AntiSymTensor3 d2dx = deriv_cell(f2, i, 1, h);
    const AntiSymTensor3 d2dy = deriv_cell(f2, i, nx, h);
    out.div.set(i, d1dx + d2dy);
    out.curl.set(i, d2dx - d1dy);
  }
  return out;
}

FieldBounds field_bounds(const TensorField& field) {
  const DomainMask& m = *field.mask;
  FieldBounds b{1e300, -1e300, 0.0};
  for (int i = 0; i < field.grid.cells(); ++i) {
    if (m.is(i, CellTag::exterior)) continue;
    const SymTensor3 u = field.at(i);
    const auto l = eigenvalues_sym3(u);
    b.min_eig = std::min(b.min_eig, l[2]);
    b.max_eig = std::max(b.max_eig, l[0]);
    b.max_norm = std::max(b.max_norm, norm(u));
  }
  return b;
}

void project_sigma_field(TensorField& field) {
  for (const int i : field.mask->interior_cells) field.set_trace1(i, project_sigma(field.at(i)));
}

TensorField conjugate_field(const TensorField& field, const Mat3& r) {
  TensorField out = field;
  auto mask = std::make_shared<DomainMask>(*field.mask);
  for (int i = 0; i < out.grid.cells(); ++i) {
    if (mask->is(i, CellTag::exterior)) continue;
    out.set(i, conjugate(r, field.at(i)));
    if (mask->is(i, CellTag::boundary))
      mask->bval[static_cast<std::size_t>(i)] = conjugate(r, mask->bval[static_cast<std::size_t>(i)]);
  }
  out.mask = mask;
  return out;
}

}  // namespace ldg
