#include <cstdlib>
#include <cstring>
#include <optional>

#include "ldg/error.hpp"
#include "ldg/kernels.hpp"

namespace ldg::kern {

namespace {

std::optional<Backend> g_forced;

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("LDG_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!avx2_supported()) fail(Errc::invalid_input, "LDG_KERNELS=avx2 but AVX2 is unavailable");
      return Backend::avx2;
    }
  }
  return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

bool avx2_supported() { return avx2::compiled_in() && cpu_has_avx2(); }

Backend active() {
  if (g_forced) return *g_forced;
  static const Backend detected = detect();
  return detected;
}

void force(Backend b) {
  if (b == Backend::avx2 && !avx2_supported())
    fail(Errc::invalid_input, "AVX2 backend is unavailable on this machine/build");
  g_forced = b;
}

void reset_auto() { g_forced.reset(); }

const char* backend_name() { return active() == Backend::avx2 ? "avx2" : "scalar"; }

void grad(const TensorField& u, const PotentialSpec& pot, double inv_eps2, double inv_h2,
          TensorField& g) {
  if (active() == Backend::avx2)
    avx2::grad(u, pot, inv_eps2, inv_h2, g);
  else
    scalar::grad(u, pot, inv_eps2, inv_h2, g);
}

void step_into(const TensorField& u, const TensorField& g, double dt, TensorField& out) {
  if (active() == Backend::avx2)
    avx2::step_into(u, g, dt, out);
  else
    scalar::step_into(u, g, dt, out);
}

EnergyParts energy(const TensorField& u, const PotentialSpec& pot) {
  return active() == Backend::avx2 ? avx2::energy(u, pot) : scalar::energy(u, pot);
}

}  // namespace ldg::kern
