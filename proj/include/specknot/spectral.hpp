#pragma once
// Discrete Fourier transforms of uniformly sampled periodic data.
//
// Conventions used throughout the library:
//   forward   F_n = sum_k f_k exp(-2 pi i n k / N)     (unnormalized)
//   inverse   f_k = (1/N) sum_n F_n exp(2 pi i n k / N)
//   mode n has signed index n for n < ceil(N/2), n - N otherwise, and angular
//   frequency xi_n = 2 pi * signed(n) / L for a domain of length L.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specknot {

using cplx = std::complex<double>;

/// Half-open physical interval [a, b).
struct Domain {
  double a = 0.0;
  double b = 1.0;

  double length() const noexcept { return b - a; }
};

/// Uniform samples f_i = f(a + i h), h = (b - a) / m.
struct Grid1D {
  std::vector<double> samples;
  Domain domain;

  std::size_t size() const noexcept { return samples.size(); }
  double spacing() const noexcept { return domain.length() / static_cast<double>(samples.size()); }
  double x(std::size_t i) const noexcept { return domain.a + static_cast<double>(i) * spacing(); }
  /// Fit parameter u_i = i / (m - 1).
  double parameter(std::size_t i) const noexcept;
};

enum class Axis { First = 1, Second = 2 };

/// m1 x m2 samples stored row-major: value(i1, i2) = samples[i1 * m2 + i2].
/// Axis::First runs along i1, Axis::Second along i2.
struct Grid2D {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::vector<double> samples;
  Domain domain1;
  Domain domain2;

  double& at(std::size_t i1, std::size_t i2) noexcept { return samples[i1 * m2 + i2]; }
  double at(std::size_t i1, std::size_t i2) const noexcept { return samples[i1 * m2 + i2]; }
  std::size_t extent(Axis axis) const noexcept { return axis == Axis::First ? m1 : m2; }
  const Domain& domain(Axis axis) const noexcept { return axis == Axis::First ? domain1 : domain2; }
  /// Throws InvalidInput unless samples.size() == m1 * m2.
  void validate() const;
};

struct Spectrum {
  std::vector<cplx> coeffs;
  std::vector<long> mode_indices;
  double domain_length = 1.0;

  std::size_t size() const noexcept { return coeffs.size(); }
};

struct Spectrum2D {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::vector<cplx> coeffs;  // row-major like Grid2D
  double length1 = 1.0;
  double length2 = 1.0;

  cplx& at(std::size_t i1, std::size_t i2) noexcept { return coeffs[i1 * m2 + i2]; }
  cplx at(std::size_t i1, std::size_t i2) const noexcept { return coeffs[i1 * m2 + i2]; }
};

struct SpectralFilter {
  std::vector<cplx> multipliers;

  std::size_t size() const noexcept { return multipliers.size(); }
};

/// Real-valued m1 x m2 multipliers, row-major.
struct SpectralFilter2D {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::vector<double> multipliers;
};

long signed_mode(std::size_t k, std::size_t n) noexcept;
std::vector<long> signed_modes(std::size_t n);
std::vector<double> frequency_vector(std::size_t n, double domain_length);

/// Raw transforms on spans; the Grid/Spectrum overloads wrap these.
std::vector<cplx> dft_forward(std::span<const double> samples);
/// Throws Numerical if the result carries an imaginary part above
/// 1e-9 * max|Re| plus a roundoff allowance of 1e-13 * max|F|.
std::vector<double> dft_inverse(std::span<const cplx> coeffs);

Spectrum fft_forward(const Grid1D& g);
std::vector<double> fft_inverse(const Spectrum& s);

Spectrum apply_filter(const Spectrum& s, const SpectralFilter& k);
/// Elementwise product of two filters.
SpectralFilter compose(const SpectralFilter& k1, const SpectralFilter& k2);

Spectrum2D fft_forward_2d(const Grid2D& g);
std::vector<double> fft_inverse_2d(const Spectrum2D& s);

/// Multiplies every strand along `axis` by `k`; k.size() must equal that extent.
Spectrum2D apply_filter_strands(const Spectrum2D& s, const SpectralFilter& k, Axis axis);
void apply_filter_strands_inplace(Spectrum2D& s, const SpectralFilter& k, Axis axis);
Spectrum2D apply_filter_2d(const Spectrum2D& s, const SpectralFilter2D& k);

/// Zeroes coefficients with |F| <= rel * max|F|. Returns the number zeroed.
std::size_t truncate_below(std::span<cplx> coeffs, double rel);

}  // namespace specknot
