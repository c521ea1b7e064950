#include "ldg/solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ldg/error.hpp"

namespace ldg {

namespace {
constexpr double kDtFloor = 1e-12;
constexpr int kConvergenceWindow = 50;
}  // namespace

void SolveConfig::validate() const {
  if (eps <= 0) fail(Errc::invalid_input, "SolveConfig: eps must be positive");
  if (dt < 0) fail(Errc::invalid_input, "SolveConfig: dt must be nonnegative");
  if (!(rel_tol > 0 && rel_tol <= 1e-2))
    fail(Errc::invalid_input, "SolveConfig: rel_tol must lie in (0, 1e-2]");
  if (max_iters < 1) fail(Errc::invalid_input, "SolveConfig: max_iters must be positive");
  for (std::size_t i = 1; i < continuation.size(); ++i)
    if (!(continuation[i] < continuation[i - 1]))
      fail(Errc::invalid_input, "SolveConfig: continuation eps list must be strictly decreasing");
  for (const double e : continuation)
    if (e <= 0) fail(Errc::invalid_input, "SolveConfig: continuation eps values must be positive");
}

double SolveConfig::initial_dt(double h) const {
  if (dt > 0) return dt;
  const double e2 = eps * eps, h2 = h * h;
  return 0.2 * h2 * e2 / (e2 + h2);
}

bool step(TensorField& field, double eps, double& dt, const kern::PotentialSpec& pot,
          double* energy_io) {
  const double h = field.grid.h;
  const double inv_h2 = 1.0 / (h * h), inv_eps2 = 1.0 / (eps * eps);

  TensorField g;
  g.grid = field.grid;
  g.mask = field.mask;
  g.allocate();
  kern::grad(field, pot, inv_eps2, inv_h2, g);

  TensorField cand = field;
  kern::step_into(field, g, dt, cand);

  // energy_io carries the cached energy across calls; NaN means "compute".
  const double e_old =
      energy_io && std::isfinite(*energy_io) ? *energy_io : energy(field, eps, pot);
  const double e_new = energy(cand, eps, pot);
  if (std::isfinite(e_new) && e_new <= e_old) {
    field = std::move(cand);
    if (energy_io) *energy_io = e_new;
    return true;
  }
  dt *= 0.5;
  if (dt < kDtFloor) fail(Errc::stalled_step, "step: dt underflowed below 1e-12");
  if (energy_io) *energy_io = e_old;
  return false;
}

SolveResult solve(const TensorField& initial, const SolveConfig& cfg) {
  cfg.validate();

  SolveResult res;
  res.field = initial;
  res.final_eps = cfg.eps;

  TensorField& u = res.field;
  const double h = u.grid.h;
  const double inv_h2 = 1.0 / (h * h);
  const double inv_eps2 = 1.0 / (cfg.eps * cfg.eps);
  const double pm_scale = h * h * inv_eps2;

  TensorField g = u;  // same layout; interior overwritten by grad
  for (auto& plane : g.c) std::fill(plane.begin(), plane.end(), 0.0);
  TensorField cand = u;  // non-interior cells stay equal to u's forever

  kern::EnergyParts parts = kern::energy(u, cfg.potential);
  double e_cur = parts.dirichlet + parts.wsum * pm_scale;
  if (!std::isfinite(e_cur)) fail(Errc::non_finite, "solve: initial energy is not finite");

  const double dt0 = cfg.initial_dt(h);
  double dt = dt0;
  double t_flow = 0.0;
  long consecutive_accepts = 0;

  // (energy, flow time) of the last kConvergenceWindow+1 accepted steps
  std::deque<std::pair<double, double>> window;
  window.emplace_back(e_cur, t_flow);

  for (long it = 1; it <= cfg.max_iters; ++it) {
    res.iterations = it;
    kern::grad(u, cfg.potential, inv_eps2, inv_h2, g);
    kern::step_into(u, g, dt, cand);
    kern::EnergyParts parts_try = kern::energy(cand, cfg.potential);
    double e_try = parts_try.dirichlet + parts_try.wsum * pm_scale;

    if (!(std::isfinite(e_try) && e_try <= e_cur)) {
      dt *= 0.5;
      consecutive_accepts = 0;
      if (dt < kDtFloor) fail(Errc::stalled_step, "solve: dt underflowed below 1e-12");
      continue;
    }

    std::swap(u.c, cand.c);
    if (cfg.sigma_projection) {
      project_sigma_field(u);
      parts_try = kern::energy(u, cfg.potential);
      e_try = parts_try.dirichlet + parts_try.wsum * pm_scale;
    }
    e_cur = e_try;
    t_flow += dt;
    res.energy_trace.push_back({it, dt, e_cur, parts_try.wsum * pm_scale});

    // slow step-size recovery after a halving
    if (++consecutive_accepts >= 100 && dt < dt0) {
      dt = std::min(dt0, 2.0 * dt);
      consecutive_accepts = 0;
    }

    window.emplace_back(e_cur, t_flow);
    if (static_cast<int>(window.size()) > kConvergenceWindow + 1) window.pop_front();
    if (static_cast<int>(window.size()) == kConvergenceWindow + 1) {
      const double de = window.front().first - e_cur;
      const double dtw = t_flow - window.front().second;
      if (dtw > 0 && de / (dtw * std::max(e_cur, 1.0)) < cfg.rel_tol) {
        res.converged = true;
        break;
      }
    }
  }

  if (res.energy_trace.empty())  // every attempt rejected within the budget
    res.energy_trace.push_back({0, dt, e_cur, parts.wsum * pm_scale});
  return res;
}

SolveResult solve(const DomainMask& mask, const BoundaryData& bd, const SolveConfig& cfg,
                  InitMode mode, std::uint64_t seed) {
  const DomainMask with_bc = apply_boundary(mask, bd);
  return solve(initial_field(with_bc, mode, seed), cfg);
}

std::vector<SolveResult> continuation_sweep(const DomainMask& mask, const BoundaryData& bd,
                                            const SolveConfig& cfg, InitMode mode,
                                            std::uint64_t seed) {
  cfg.validate();
  std::vector<double> eps_list = cfg.continuation.empty() ? std::vector<double>{cfg.eps} : cfg.continuation;

  const DomainMask with_bc = apply_boundary(mask, bd);
  std::vector<SolveResult> out;
  out.reserve(eps_list.size());

  TensorField u = initial_field(with_bc, mode, seed);
  for (const double eps : eps_list) {
    SolveConfig c = cfg;
    c.eps = eps;
    c.continuation.clear();
    out.push_back(solve(u, c));
    u = out.back().field;  // warm start
  }
  return out;
}

}  // namespace ldg
