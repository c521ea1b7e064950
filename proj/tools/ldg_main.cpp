// ldgrun: planar Landau-de Gennes tensor-field minimization and defect
// analysis. Subcommands: solve, sweep, analyze, selftest.
//
// Exit codes: 0 ok, 1 usage/config/IO error, 2 non-convergence,
// 3 analysis anomaly (no defect / multiple defects).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldg/config.hpp"
#include "ldg/csv.hpp"
#include "ldg/defect.hpp"
#include "ldg/error.hpp"
#include "ldg/psi.hpp"
#include "ldg/selftest.hpp"
#include "ldg/snapshot.hpp"
#include "ldg/solve.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ldg;

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

void write_trace(const std::vector<TraceRow>& trace, double eps, const std::string& path) {
  CsvWriter w(path);
  w.raw("iter,eps,dt,energy,potential_mass");
  for (const TraceRow& row : trace) {
    w.field(static_cast<int>(row.iter));
    w.field(eps);
    w.field(row.dt);
    w.field(row.energy);
    w.field(row.potential_mass);
    w.end_row();
  }
  if (!w.good()) fail(Errc::io_error, "failed writing trace: " + path);
}

// Builds mask+field per config; snapshot init adopts the snapshot's grid.
std::pair<DomainMask, TensorField> prepare_problem(const RunConfig& cfg) {
  const BoundaryData bd = cfg.boundary();
  if (cfg.init_mode() == InitMode::snapshot) {
    const TensorField loaded = load_snapshot(cfg.snapshot);
    DomainMask mask = apply_boundary(*loaded.mask, bd);
    TensorField init = initial_field(mask, InitMode::snapshot, cfg.seed, &loaded);
    return {std::move(mask), std::move(init)};
  }
  DomainMask mask = apply_boundary(make_disk_domain(cfg.n, cfg.radius), bd);
  TensorField init = initial_field(mask, cfg.init_mode(), cfg.seed);
  return {std::move(mask), std::move(init)};
}

int cmd_solve(const std::string& config_path, const std::string& out_override, bool quiet) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  cfg.apply_kernel_choice();

  auto [mask, init] = prepare_problem(cfg);
  SolveConfig sc = cfg.solver();
  sc.continuation.clear();

  const SolveResult res = solve(init, sc);

  fs::create_directories(cfg.out);
  write_snapshot(res.field, (fs::path(cfg.out) / "snapshot.csv").string());
  write_trace(res.energy_trace, sc.eps, (fs::path(cfg.out) / "trace.csv").string());

  if (!quiet)
    std::printf("solve: eps=%g iters=%ld energy=%.10g converged=%s kernels=%s\n", sc.eps,
                res.iterations, res.energy_trace.back().energy, res.converged ? "yes" : "no",
                kern::backend_name());
  return res.converged ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, bool quiet) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  cfg.apply_kernel_choice();
  if (cfg.eps_list.size() < 3)
    fail(Errc::invalid_input, "sweep needs eps_list with at least 3 decreasing values");

  const BoundaryData bd = cfg.boundary();
  const DomainMask mask = make_disk_domain(cfg.n, cfg.radius);
  const std::vector<SolveResult> results =
      continuation_sweep(mask, bd, cfg.solver(), cfg.init_mode(), cfg.seed);

  fs::create_directories(cfg.out);
  bool all_converged = true;
  std::vector<std::pair<double, double>> eps_energy;
  {
    CsvWriter w((fs::path(cfg.out) / "scaling.csv").string());
    w.raw("eps,energy,potential_mass,slope_so_far");
    for (const SolveResult& r : results) {
      all_converged = all_converged && r.converged;
      const std::string tag = eps_tag(r.final_eps);
      write_snapshot(r.field, (fs::path(cfg.out) / ("snapshot_eps" + tag + ".csv")).string());
      write_trace(r.energy_trace, r.final_eps, (fs::path(cfg.out) / ("trace_eps" + tag + ".csv")).string());

      const TraceRow& last = r.energy_trace.back();
      eps_energy.emplace_back(r.final_eps, last.energy);
      w.field(r.final_eps);
      w.field(last.energy);
      w.field(last.potential_mass);
      if (eps_energy.size() >= 3)
        w.field(scaling_fit(eps_energy).slope);
      else
        w.field(std::string("nan"));
      w.end_row();
      if (!quiet)
        std::printf("sweep: eps=%g iters=%ld energy=%.10g converged=%s\n", r.final_eps, r.iterations,
                    last.energy, r.converged ? "yes" : "no");
    }
  }
  if (!quiet) {
    const ScalingFit fit = scaling_fit(eps_energy);
    std::printf("sweep: slope=%.6f intercept=%.6f residual=%.3g kernels=%s\n", fit.slope,
                fit.intercept, fit.residual, kern::backend_name());
  }
  return all_converged ? 0 : 2;
}

int cmd_analyze(const std::string& snapshot_path, const std::string& config_path,
                const std::string& out_override, bool quiet) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  cfg.apply_kernel_choice();

  const TensorField field = load_snapshot(snapshot_path);
  fs::create_directories(cfg.out);
  const std::string defect_path = (fs::path(cfg.out) / "defect_report.csv").string();

  const DefectLocation loc = locate_defect(field);
  if (loc.status == DefectLocation::Status::no_defect) {
    CsvWriter w(defect_path);
    w.raw("eps,core_x,core_y,peak_dist,r,xi,lam_12,lam_13,lam_23,lam_norm");
    std::fprintf(stderr, "analyze: no defect found (peak dist-to-P %.3g < 0.1)\n", loc.peak);
    return 3;
  }

  std::vector<double> radii;
  radii.reserve(cfg.radii.size());
  for (const double f : cfg.radii) radii.push_back(f * cfg.radius);

  const DefectReport report = build_defect_report(field, cfg.eps, loc.core, radii);
  write_defect_report(report, defect_path);

  const AntiSymTensor3 lam_mid = circulation(field, loc.core, 0.5 * cfg.radius);
  const PsiReport psi = recover_psi(field, loc.core, lam_mid, cfg.boundary());
  write_psi_report(psi, cfg.eps, (fs::path(cfg.out) / "psi_report.csv").string());
  write_psi_field(psi.psi, (fs::path(cfg.out) / "psi_field.csv").string());

  if (!quiet)
    std::printf("analyze: core=(%.6f, %.6f) peak=%.4f |Lambda(0.5R)|=%.6f sup|psi|=%.6f\n",
                loc.core[0], loc.core[1], loc.peak, lam_mid.norm(), psi.sup_norm);

  if (loc.status == DefectLocation::Status::multiple_defects) {
    std::fprintf(stderr, "analyze: multiple defect candidates detected\n");
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar Landau-de Gennes minimizer and defect analysis"};
  app.require_subcommand(1);

  std::string config_path, snapshot_path, out_override;
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* solve_cmd = app.add_subcommand("solve", "minimize at a single eps, write snapshot + trace");
  solve_cmd->add_option("--config", config_path, "key = value config file")->required();
  solve_cmd->add_option("--out", out_override, "output directory override");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "eps-continuation sweep with scaling summary");
  sweep_cmd->add_option("--config", config_path, "key = value config file")->required();
  sweep_cmd->add_option("--out", out_override, "output directory override");

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "defect + psi analysis of a snapshot");
  analyze_cmd->add_option("--snapshot", snapshot_path, "snapshot CSV path")->required();
  analyze_cmd->add_option("--config", config_path, "key = value config file")->required();
  analyze_cmd->add_option("--out", out_override, "output directory override");

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run the oracle suites");
  (void)selftest_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(config_path, out_override, quiet);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_override, quiet);
    if (analyze_cmd->parsed()) return cmd_analyze(snapshot_path, config_path, out_override, quiet);
    if (selftest_cmd->parsed()) return ldg::run_selftest(quiet);
  } catch (const ldg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
