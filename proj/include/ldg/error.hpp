#pragma once

#include <stdexcept>
#include <string>

namespace ldg {

enum class Errc {
  invalid_input,
  degenerate_top,
  perpendicular_pair,
  even_winding,
  too_coarse,
  invalid_geometry,
  snapshot_mismatch,
  stalled_step,
  non_finite,
  circle_outside,
  solver_diverged,
  degenerate_fit,
  io_error,
};

// All library errors are thrown as Error; `code()` distinguishes the cases
// the operations document.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ldg
