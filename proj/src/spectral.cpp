#include "specknot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft_backend.hpp"
#include "specknot/error.hpp"
#include "specknot/simd/kernels.hpp"

namespace specknot {
namespace {

const cplx* as_cplx(const fftw_complex* p) { return reinterpret_cast<const cplx*>(p); }

void check_imaginary_residue(std::span<const cplx> input, std::span<const cplx> output) {
  const simd::PartMax in = simd::max_abs_parts(input);
  const simd::PartMax out = simd::max_abs_parts(output);
  const double allowance = 1e-9 * out.real + 1e-13 * std::max(in.real, in.imag);
  if (!(out.imag <= allowance)) {
    fail(ErrorKind::Numerical, "inverse transform left an imaginary residue of " +
                                   std::to_string(out.imag) + " against a real magnitude of " +
                                   std::to_string(out.real) + "; the spectrum is not conjugate-symmetric");
  }
}

}  // namespace

double Grid1D::parameter(std::size_t i) const noexcept {
  const std::size_t m = samples.size();
  return m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
}

void Grid2D::validate() const {
  require(samples.size() == m1 * m2, "Grid2D: sample count " + std::to_string(samples.size()) +
                                         " does not match " + std::to_string(m1) + "x" + std::to_string(m2));
  require(domain1.b > domain1.a && domain2.b > domain2.a, "Grid2D: empty domain");
}

long signed_mode(std::size_t k, std::size_t n) noexcept {
  const std::size_t half = (n + 1) / 2;
  return k < half ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

std::vector<long> signed_modes(std::size_t n) {
  std::vector<long> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = signed_mode(k, n);
  return out;
}

std::vector<double> frequency_vector(std::size_t n, double domain_length) {
  require(n >= 1, "frequency_vector: n must be at least 1");
  require(domain_length > 0.0, "frequency_vector: domain length must be positive");
  std::vector<double> xi(n);
  const double scale = 2.0 * std::numbers::pi / domain_length;
  for (std::size_t k = 0; k < n; ++k) xi[k] = scale * static_cast<double>(signed_mode(k, n));
  return xi;
}

std::vector<cplx> dft_forward(std::span<const double> samples) {
  const std::size_t n = samples.size();
  require(n >= 2, "fft_forward: need at least 2 samples, got " + std::to_string(n));
  const std::size_t half = n / 2 + 1;
  auto in = detail::alloc_real(n);
  auto out = detail::alloc_complex(half);
  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute_dft_r2c(detail::plan_r2c_1d(n), in.get(), out.get());

  std::vector<cplx> coeffs(n);
  const cplx* h = as_cplx(out.get());
  std::copy(h, h + half, coeffs.begin());
  for (std::size_t k = half; k < n; ++k) coeffs[k] = std::conj(coeffs[n - k]);
  return coeffs;
}

std::vector<double> dft_inverse(std::span<const cplx> coeffs) {
  const std::size_t n = coeffs.size();
  require(n >= 1, "fft_inverse: empty spectrum");
  auto in = detail::alloc_complex(n);
  auto out = detail::alloc_complex(n);
  std::copy(coeffs.begin(), coeffs.end(), reinterpret_cast<cplx*>(in.get()));
  fftw_execute_dft(detail::plan_c2c_1d(n, FFTW_BACKWARD), in.get(), out.get());

  std::span<cplx> result(reinterpret_cast<cplx*>(out.get()), n);
  simd::scale_uniform(cplx(1.0 / static_cast<double>(n), 0.0), result);
  check_imaginary_residue(coeffs, result);

  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) samples[k] = result[k].real();
  return samples;
}

Spectrum fft_forward(const Grid1D& g) {
  require(g.domain.b > g.domain.a, "fft_forward: empty domain");
  Spectrum s;
  s.coeffs = dft_forward(g.samples);
  s.mode_indices = signed_modes(g.size());
  s.domain_length = g.domain.length();
  return s;
}

std::vector<double> fft_inverse(const Spectrum& s) { return dft_inverse(s.coeffs); }

Spectrum apply_filter(const Spectrum& s, const SpectralFilter& k) {
  require(s.size() == k.size(), "apply_filter: filter has " + std::to_string(k.size()) +
                                    " multipliers for a spectrum of " + std::to_string(s.size()));
  Spectrum out;
  out.coeffs.resize(s.size());
  out.mode_indices = s.mode_indices;
  out.domain_length = s.domain_length;
  simd::multiply(k.multipliers, s.coeffs, out.coeffs);
  return out;
}

SpectralFilter compose(const SpectralFilter& k1, const SpectralFilter& k2) {
  require(k1.size() == k2.size(), "compose: filter lengths differ");
  SpectralFilter out;
  out.multipliers.resize(k1.size());
  simd::multiply(k1.multipliers, k2.multipliers, out.multipliers);
  return out;
}

Spectrum2D fft_forward_2d(const Grid2D& g) {
  g.validate();
  require(g.m1 >= 2 && g.m2 >= 2, "fft_forward_2d: need at least 2 samples per dimension");
  const std::size_t n = g.m1 * g.m2;
  auto in = detail::alloc_complex(n);
  auto out = detail::alloc_complex(n);
  auto* pin = reinterpret_cast<cplx*>(in.get());
  for (std::size_t i = 0; i < n; ++i) pin[i] = cplx(g.samples[i], 0.0);
  fftw_execute_dft(detail::plan_c2c_2d(g.m1, g.m2, FFTW_FORWARD), in.get(), out.get());

  Spectrum2D s;
  s.m1 = g.m1;
  s.m2 = g.m2;
  s.length1 = g.domain1.length();
  s.length2 = g.domain2.length();
  const cplx* pout = as_cplx(out.get());
  s.coeffs.assign(pout, pout + n);
  return s;
}

std::vector<double> fft_inverse_2d(const Spectrum2D& s) {
  const std::size_t n = s.m1 * s.m2;
  require(n >= 1 && s.coeffs.size() == n, "fft_inverse_2d: malformed spectrum");
  auto in = detail::alloc_complex(n);
  auto out = detail::alloc_complex(n);
  std::copy(s.coeffs.begin(), s.coeffs.end(), reinterpret_cast<cplx*>(in.get()));
  fftw_execute_dft(detail::plan_c2c_2d(s.m1, s.m2, FFTW_BACKWARD), in.get(), out.get());

  std::span<cplx> result(reinterpret_cast<cplx*>(out.get()), n);
  simd::scale_uniform(cplx(1.0 / static_cast<double>(n), 0.0), result);
  check_imaginary_residue(s.coeffs, result);

  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) samples[k] = result[k].real();
  return samples;
}

void apply_filter_strands_inplace(Spectrum2D& s, const SpectralFilter& k, Axis axis) {
  const std::size_t extent = axis == Axis::First ? s.m1 : s.m2;
  require(k.size() == extent, "apply_filter_strands: filter has " + std::to_string(k.size()) +
                                  " multipliers for an extent of " + std::to_string(extent));
  const auto& table = simd::kernels();
  for (std::size_t i1 = 0; i1 < s.m1; ++i1) {
    cplx* row = s.coeffs.data() + i1 * s.m2;
    if (axis == Axis::First) {
      table.scale_uniform(k.multipliers[i1], row, s.m2);
    } else {
      table.multiply(row, k.multipliers.data(), row, s.m2);
    }
  }
}

Spectrum2D apply_filter_strands(const Spectrum2D& s, const SpectralFilter& k, Axis axis) {
  Spectrum2D out = s;
  apply_filter_strands_inplace(out, k, axis);
  return out;
}

Spectrum2D apply_filter_2d(const Spectrum2D& s, const SpectralFilter2D& k) {
  require(k.m1 == s.m1 && k.m2 == s.m2 && k.multipliers.size() == s.coeffs.size(),
          "apply_filter_2d: filter shape does not match the spectrum");
  Spectrum2D out = s;
  simd::scale_real(k.multipliers, s.coeffs, out.coeffs);
  return out;
}

std::size_t truncate_below(std::span<cplx> coeffs, double rel) {
  if (rel <= 0.0 || coeffs.empty()) return 0;
  double peak = 0.0;
  for (const cplx& c : coeffs) peak = std::max(peak, std::abs(c));
  const double cut = rel * peak;
  std::size_t zeroed = 0;
  for (cplx& c : coeffs) {
    if (std::abs(c) <= cut && c != cplx(0.0, 0.0)) {
      c = 0.0;
      ++zeroed;
    }
  }
  return zeroed;
}

}  // namespace specknot
