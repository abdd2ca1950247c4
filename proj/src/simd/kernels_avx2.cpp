// AVX2 kernels. Two interleaved complex doubles per 256-bit register.
// No FMA: products and sums are rounded separately, matching the scalar path.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace specknot::simd::avx2 {
namespace {

// [ar0 ai0 ar1 ai1] * [br0 bi0 br1 bi1]
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);             // br0 br0 br1 br1
  const __m256d b_im = _mm256_permute_pd(b, 0b1111);     // bi0 bi0 bi1 bi1
  const __m256d a_sw = _mm256_permute_pd(a, 0b0101);     // ai0 ar0 ai1 ar1
  const __m256d t1 = _mm256_mul_pd(a, b_re);             // ar*br, ai*br
  const __m256d t2 = _mm256_mul_pd(a_sw, b_im);          // ai*bi, ar*bi
  return _mm256_addsub_pd(t1, t2);                       // ar*br-ai*bi, ai*br+ar*bi
}

void multiply(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  auto* pb = reinterpret_cast<const double*>(b);
  auto* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    _mm256_storeu_pd(po + 2 * i, cmul(va, vb));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void scale_real(const double* k, const cplx* a, cplx* out, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  auto* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    // k0 k0 k1 k1
    const __m128d kk = _mm_loadu_pd(k + i);
    const __m256d kv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(kk), 0b01010000);
    _mm256_storeu_pd(po + 2 * i, _mm256_mul_pd(kv, _mm256_loadu_pd(pa + 2 * i)));
  }
  for (; i < n; ++i) {
    out[i] = cplx(k[i] * a[i].real(), k[i] * a[i].imag());
  }
}

void scale_uniform(cplx c, cplx* inout, std::size_t n) {
  auto* p = reinterpret_cast<double*>(inout);
  const __m256d vc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(p + 2 * i, cmul(_mm256_loadu_pd(p + 2 * i), vc));
  }
  const double cr = c.real(), ci = c.imag();
  for (; i < n; ++i) {
    const double ar = inout[i].real(), ai = inout[i].imag();
    inout[i] = cplx(ar * cr - ai * ci, ai * cr + ar * ci);
  }
}

PartMax max_abs_parts(const cplx* a, std::size_t n) {
  auto* pa = reinterpret_cast<const double*>(a);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(pa + 2 * i));
    acc = _mm256_max_pd(v, acc);  // NaN lanes keep acc, like the scalar std::max
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  PartMax m{std::max(lanes[0], lanes[2]), std::max(lanes[1], lanes[3])};
  for (; i < n; ++i) {
    m.real = std::max(m.real, std::abs(a[i].real()));
    m.imag = std::max(m.imag, std::abs(a[i].imag()));
  }
  return m;
}

constexpr KernelTable kTable{multiply, scale_real, scale_uniform, max_abs_parts};

}  // namespace

const KernelTable& table() noexcept { return kTable; }

}  // namespace specknot::simd::avx2
