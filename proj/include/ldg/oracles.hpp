#pragma once

// Independent reference computations used by the self-test and the test
// suites. These deliberately avoid the code paths they cross-check.

#include <algorithm>
#include <array>
#include <numeric>

namespace ldg::oracle {

// Euclidean projection onto the standard simplex via sort-and-threshold
// (find the largest support whose water level keeps all entries positive).
inline std::array<double, 3> simplex_project_generic(const std::array<double, 3>& v) {
  std::array<double, 3> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  int support = 0;
  for (int j = 0; j < 3; ++j) {
    cum += u[static_cast<std::size_t>(j)];
    const double level = (cum - 1.0) / (j + 1);
    if (u[static_cast<std::size_t>(j)] - level > 0) {
      tau = level;
      support = j + 1;
    }
  }
  (void)support;
  std::array<double, 3> out{};
  for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(j)] = std::max(v[static_cast<std::size_t>(j)] - tau, 0.0);
  return out;
}

}  // namespace ldg::oracle
