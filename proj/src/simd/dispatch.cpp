#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "specknot/error.hpp"

namespace specknot::simd {
namespace {

bool cpu_has(Level level) noexcept {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if defined(SPECKNOT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::Neon:
#if defined(SPECKNOT_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Level initial_level() noexcept {
  if (const char* env = std::getenv("SPECKNOT_SIMD")) {
    const std::string want(env);
    for (Level l : {Level::Scalar, Level::Avx2, Level::Neon}) {
      if (want == name(l) && cpu_has(l)) return l;
    }
  }
  return detected_level();
}

std::atomic<Level>& active() noexcept {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

std::string_view name(Level level) noexcept {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "unknown";
}

bool supported(Level level) noexcept { return cpu_has(level); }

Level detected_level() noexcept {
  if (cpu_has(Level::Avx2)) return Level::Avx2;
  if (cpu_has(Level::Neon)) return Level::Neon;
  return Level::Scalar;
}

Level active_level() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
  if (!cpu_has(level)) {
    fail(ErrorKind::InvalidInput, "SIMD level '" + std::string(name(level)) + "' is not supported here");
  }
  active().store(level, std::memory_order_relaxed);
}

const KernelTable& kernels(Level level) {
  if (!cpu_has(level)) {
    fail(ErrorKind::InvalidInput, "SIMD level '" + std::string(name(level)) + "' is not supported here");
  }
  switch (level) {
#if defined(SPECKNOT_HAVE_AVX2)
    case Level::Avx2: return avx2::table();
#endif
#if defined(SPECKNOT_HAVE_NEON)
    case Level::Neon: return neon::table();
#endif
    default: return scalar::table();
  }
}

const KernelTable& kernels() noexcept {
  switch (active_level()) {
#if defined(SPECKNOT_HAVE_AVX2)
    case Level::Avx2: return avx2::table();
#endif
#if defined(SPECKNOT_HAVE_NEON)
    case Level::Neon: return neon::table();
#endif
    default: return scalar::table();
  }
}

void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  require(a.size() == b.size() && a.size() == out.size(), "multiply: size mismatch");
  kernels().multiply(a.data(), b.data(), out.data(), a.size());
}

void scale_real(std::span<const double> k, std::span<const cplx> a, std::span<cplx> out) {
  require(k.size() == a.size() && a.size() == out.size(), "scale_real: size mismatch");
  kernels().scale_real(k.data(), a.data(), out.data(), a.size());
}

void scale_uniform(cplx c, std::span<cplx> inout) {
  kernels().scale_uniform(c, inout.data(), inout.size());
}

PartMax max_abs_parts(std::span<const cplx> a) {
  return kernels().max_abs_parts(a.data(), a.size());
}

}  // namespace specknot::simd
