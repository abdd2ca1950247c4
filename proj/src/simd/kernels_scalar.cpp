// Reference kernels. Built with -ffp-contract=off so the compiler cannot fuse
// multiply-adds; the vector variants reproduce these results bit for bit.

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace specknot::simd::scalar {
namespace {

void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void scale_real(const double* k, const cplx* a, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = cplx(k[i] * a[i].real(), k[i] * a[i].imag());
  }
}

void scale_uniform(cplx c, cplx* inout, std::size_t n) {
  const double cr = c.real(), ci = c.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = inout[i].real(), ai = inout[i].imag();
    inout[i] = cplx(ar * cr - ai * ci, ai * cr + ar * ci);
  }
}

PartMax max_abs_parts(const cplx* a, std::size_t n) {
  PartMax m;
  for (std::size_t i = 0; i < n; ++i) {
    m.real = std::max(m.real, std::abs(a[i].real()));
    m.imag = std::max(m.imag, std::abs(a[i].imag()));
  }
  return m;
}

constexpr KernelTable kTable{multiply, scale_real, scale_uniform, max_abs_parts};

}  // namespace

const KernelTable& table() noexcept { return kTable; }

}  // namespace specknot::simd::scalar
