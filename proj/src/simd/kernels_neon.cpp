// AArch64 NEON kernels. One complex double per 128-bit register.
// Built with -ffp-contract=off so vmul/vadd are not fused into vfma.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace specknot::simd::neon {
namespace {

inline float64x2_t cmul(float64x2_t a, float64x2_t b) {
  const float64x2_t b_re = vdupq_laneq_f64(b, 0);
  const float64x2_t b_im = vdupq_laneq_f64(b, 1);
  const float64x2_t a_sw = vextq_f64(a, a, 1);          // ai ar
  const float64x2_t t1 = vmulq_f64(a, b_re);            // ar*br ai*br
  const float64x2_t t2 = vmulq_f64(a_sw, b_im);         // ai*bi ar*bi
  const float64x2_t sign = {-1.0, 1.0};
  return vaddq_f64(t1, vmulq_f64(t2, sign));            // ar*br-ai*bi ai*br+ar*bi
}

void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  auto* pb = reinterpret_cast<const double*>(b);
  auto* po = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(po + 2 * i, cmul(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i)));
  }
}

void scale_real(const double* k, const cplx* a, cplx* out, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  auto* po = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(po + 2 * i, vmulq_f64(vdupq_n_f64(k[i]), vld1q_f64(pa + 2 * i)));
  }
}

void scale_uniform(cplx c, cplx* inout, std::size_t n) {
  auto* p = reinterpret_cast<double*>(inout);
  const float64x2_t vc = {c.real(), c.imag()};
  for (std::size_t i = 0; i < n; ++i) {
    vst1q_f64(p + 2 * i, cmul(vld1q_f64(p + 2 * i), vc));
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

}  // namespace specknot::simd::neon
