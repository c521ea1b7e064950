#include "ldg/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "ldg/csv.hpp"
#include "ldg/error.hpp"

namespace ldg {

void write_snapshot(const TensorField& field, const std::string& path) {
  CsvWriter w(path);
  w.raw(kSnapshotHeader);
  const DomainMask& m = *field.mask;
  for (int i = 0; i < field.grid.cells(); ++i) {
    const CellTag t = m.tag[static_cast<std::size_t>(i)];
    if (t == CellTag::exterior) continue;
    const SymTensor3 u = field.at(i);
    w.field(field.grid.cx(i % field.grid.nx));
    w.field(field.grid.cy(i / field.grid.nx));
    w.field(t == CellTag::interior ? std::string("interior") : std::string("boundary"));
    w.field(u.xx); w.field(u.xy); w.field(u.xz);
    w.field(u.yy); w.field(u.yz); w.field(u.zz);
    w.end_row();
  }
  if (!w.good()) fail(Errc::io_error, "failed writing snapshot: " + path);
}

namespace {

struct Row {
  double x, y;
  CellTag tag;
  SymTensor3 u;
};

double parse_double(const std::string& s, const std::string& path, int line) {
  char* endp = nullptr;
  const double v = std::strtod(s.c_str(), &endp);
  if (endp == s.c_str() || *endp != '\0')
    fail(Errc::io_error, path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

// Smallest positive gap between consecutive distinct coordinates.
double min_gap(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() < 2) fail(Errc::io_error, "snapshot too small to infer grid spacing");
  double g = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) g = std::min(g, v[i] - v[i - 1]);
  return g;
}

}  // namespace

TensorField load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open snapshot: " + path);

  std::string line;
  if (!std::getline(in, line)) fail(Errc::io_error, "empty snapshot: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSnapshotHeader)
    fail(Errc::io_error, "snapshot header mismatch in " + path);

  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) toks.push_back(tok);
    if (toks.size() != 9)
      fail(Errc::io_error, path + ":" + std::to_string(lineno) + ": expected 9 fields");
    Row r;
    r.x = parse_double(toks[0], path, lineno);
    r.y = parse_double(toks[1], path, lineno);
    if (toks[2] == "interior") r.tag = CellTag::interior;
    else if (toks[2] == "boundary") r.tag = CellTag::boundary;
    else fail(Errc::io_error, path + ":" + std::to_string(lineno) + ": bad tag '" + toks[2] + "'");
    r.u.xx = parse_double(toks[3], path, lineno);
    r.u.xy = parse_double(toks[4], path, lineno);
    r.u.xz = parse_double(toks[5], path, lineno);
    r.u.yy = parse_double(toks[6], path, lineno);
    r.u.yz = parse_double(toks[7], path, lineno);
    r.u.zz = parse_double(toks[8], path, lineno);
    rows.push_back(r);
  }
  if (rows.empty()) fail(Errc::io_error, "snapshot has no cells: " + path);

  std::vector<double> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (const Row& r : rows) { xs.push_back(r.x); ys.push_back(r.y); }
  const double hx = min_gap(xs), hy = min_gap(ys);
  if (std::abs(hx - hy) > 1e-9 * std::max(hx, hy))
    fail(Errc::io_error, "snapshot grid is not square");
  const double h = hx;
  const double xmin = *std::min_element(xs.begin(), xs.end());
  const double ymin = *std::min_element(ys.begin(), ys.end());
  const double xmax = *std::max_element(xs.begin(), xs.end());
  const double ymax = *std::max_element(ys.begin(), ys.end());

  // one exterior margin cell on every side
  DomainMask mask;
  mask.grid.nx = static_cast<int>(std::lround((xmax - xmin) / h)) + 3;
  mask.grid.ny = static_cast<int>(std::lround((ymax - ymin) / h)) + 3;
  mask.grid.h = h;
  mask.grid.origin = {xmin - 1.5 * h, ymin - 1.5 * h};
  mask.tag.assign(static_cast<std::size_t>(mask.grid.cells()), CellTag::exterior);

  std::vector<int> cell_of_row(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int ix = static_cast<int>(std::lround((rows[k].x - xmin) / h)) + 1;
    const int iy = static_cast<int>(std::lround((rows[k].y - ymin) / h)) + 1;
    const int i = mask.grid.idx(ix, iy);
    cell_of_row[k] = i;
    mask.tag[static_cast<std::size_t>(i)] = rows[k].tag;
  }

  // the natural center of the reconstructed domain
  mask.center = {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
  double rad = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].tag == CellTag::interior)
      rad = std::max(rad, std::hypot(rows[k].x - mask.center[0], rows[k].y - mask.center[1]));
  mask.radius = rad + 0.5 * h;

  rebuild_mask_structure(mask);

  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].tag == CellTag::boundary)
      mask.bval[static_cast<std::size_t>(cell_of_row[k])] = rows[k].u;
  mask.boundary_applied = true;

  TensorField f;
  f.grid = mask.grid;
  f.mask = std::make_shared<DomainMask>(mask);
  f.allocate();
  for (int i = 0; i < f.grid.cells(); ++i) f.set(i, SymTensor3::isotropic());
  for (std::size_t k = 0; k < rows.size(); ++k) f.set(cell_of_row[k], rows[k].u);
  return f;
}

}  // namespace ldg
