#pragma once
// Elementwise kernels behind spectral filtering.
//
// Every kernel has a scalar reference implementation plus optional AVX2 (x86-64)
// and NEON (AArch64) variants. The variant is chosen once at startup from the
// CPU's capabilities; the SPECKNOT_SIMD environment variable ("scalar", "avx2",
// "neon") or set_active_level() overrides the choice. All variants perform the
// same IEEE operations in the same order, so their results are bit-identical.

#include <complex>
#include <span>
#include <string_view>

namespace specknot::simd {

using cplx = std::complex<double>;

enum class Level { Scalar, Avx2, Neon };

std::string_view name(Level level) noexcept;

/// True when the running CPU and this build both support `level`.
bool supported(Level level) noexcept;

/// Best level supported on this machine.
Level detected_level() noexcept;

Level active_level() noexcept;

/// Throws specknot::Error when `level` is unsupported.
void set_active_level(Level level);

struct PartMax {
  double real = 0.0;
  double imag = 0.0;
};

/// Function table for one instruction-set level.
struct KernelTable {
  /// out[i] = a[i] * b[i] (complex product, no special handling of inf/nan)
  void (*multiply)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  /// out[i] = k[i] * a[i] with real k
  void (*scale_real)(const double* k, const cplx* a, cplx* out, std::size_t n);
  /// inout[i] *= c
  void (*scale_uniform)(cplx c, cplx* inout, std::size_t n);
  /// max |Re|, max |Im|
  PartMax (*max_abs_parts)(const cplx* a, std::size_t n);
};

/// Kernels for a given level; throws when unsupported.
const KernelTable& kernels(Level level);

/// Kernels for the active level.
const KernelTable& kernels() noexcept;

// Span front-ends over the active table. Sizes must match.
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void scale_real(std::span<const double> k, std::span<const cplx> a, std::span<cplx> out);
void scale_uniform(cplx c, std::span<cplx> inout);
PartMax max_abs_parts(std::span<const cplx> a);

}  // namespace specknot::simd
