#pragma once

// Field snapshot format: text CSV, header
//   x,y,tag,u_xx,u_xy,u_xz,u_yy,u_yz,u_zz
// one row per non-exterior cell in row-major order, 17 significant digits.

#include <string>

#include "ldg/grid.hpp"

namespace ldg {

inline constexpr const char* kSnapshotHeader = "x,y,tag,u_xx,u_xy,u_xz,u_yy,u_yz,u_zz";

void write_snapshot(const TensorField& field, const std::string& path);

// Rebuilds the grid (with a one-cell exterior margin), mask tags, and values
// from a snapshot file. Boundary rows become the fixed trace of the mask.
TensorField load_snapshot(const std::string& path);

}  // namespace ldg
