#include "ldg/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ldg/error.hpp"
#include "ldg/kernels.hpp"

namespace ldg {

BoundaryData RunConfig::boundary() const {
  BoundaryData bd;
  bd.winding = k;
  bd.frame = euler_zyx(frame_z, frame_y, frame_x);
  bd.phase = phase;
  return bd;
}

SolveConfig RunConfig::solver() const {
  SolveConfig c;
  c.eps = eps;
  c.dt = dt;
  c.max_iters = max_iters;
  c.rel_tol = rel_tol;
  c.sigma_projection = sigma_projection;
  c.continuation = eps_list;
  c.potential = beta == 0.0 ? kern::PotentialSpec::eq2() : kern::PotentialSpec::wbeta(beta);
  return c;
}

InitMode RunConfig::init_mode() const {
  if (init == "radial-melt") return InitMode::radial_melt;
  if (init == "random") return InitMode::random;
  if (init == "snapshot") return InitMode::snapshot;
  fail(Errc::invalid_input, "init must be radial-melt, random, or snapshot (got '" + init + "')");
}

void RunConfig::apply_kernel_choice() const {
  if (kernels == "auto") {
    kern::reset_auto();
  } else if (kernels == "scalar") {
    kern::force(kern::Backend::scalar);
  } else if (kernels == "avx2") {
    kern::force(kern::Backend::avx2);
  } else {
    fail(Errc::invalid_input, "kernels must be auto, scalar, or avx2 (got '" + kernels + "')");
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(const std::string& path, int line, const std::string& why) {
  fail(Errc::invalid_input, path + ":" + std::to_string(line) + ": " + why);
}

double parse_num(const std::string& v, const std::string& path, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') bad_line(path, line, "expected a number, got '" + v + "'");
  return x;
}

long parse_int(const std::string& v, const std::string& path, int line) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') bad_line(path, line, "expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& path, int line) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  bad_line(path, line, "expected a boolean (0/1/true/false), got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& path, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) bad_line(path, line, "empty list element");
    out.push_back(parse_num(tok, path, line));
  }
  if (out.empty()) bad_line(path, line, "expected a comma-separated list");
  return out;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config: " + path);

  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad_line(path, lineno, "expected 'key = value', got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) bad_line(path, lineno, "empty key");
    if (val.empty()) bad_line(path, lineno, "empty value for key '" + key + "'");

    if (key == "n") c.n = static_cast<int>(parse_int(val, path, lineno));
    else if (key == "radius") c.radius = parse_num(val, path, lineno);
    else if (key == "k") c.k = static_cast<int>(parse_int(val, path, lineno));
    else if (key == "frame_z") c.frame_z = parse_num(val, path, lineno);
    else if (key == "frame_y") c.frame_y = parse_num(val, path, lineno);
    else if (key == "frame_x") c.frame_x = parse_num(val, path, lineno);
    else if (key == "phase") c.phase = parse_num(val, path, lineno);
    else if (key == "eps") c.eps = parse_num(val, path, lineno);
    else if (key == "eps_list") c.eps_list = parse_list(val, path, lineno);
    else if (key == "dt") c.dt = parse_num(val, path, lineno);
    else if (key == "max_iters") c.max_iters = parse_int(val, path, lineno);
    else if (key == "rel_tol") c.rel_tol = parse_num(val, path, lineno);
    else if (key == "sigma_projection") c.sigma_projection = parse_bool(val, path, lineno);
    else if (key == "beta") c.beta = parse_num(val, path, lineno);
    else if (key == "init") c.init = val;
    else if (key == "snapshot") c.snapshot = val;
    else if (key == "radii") c.radii = parse_list(val, path, lineno);
    else if (key == "out") c.out = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(val, path, lineno));
    else if (key == "kernels") c.kernels = val;
    else bad_line(path, lineno, "unknown key '" + key + "'");
  }
  return c;
}

}  // namespace ldg
