#include "specknot/filters.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "specknot/error.hpp"
#include "specknot/simd/kernels.hpp"

namespace specknot {
namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double x, int q) {
  double r = 1.0;
  for (int i = 0; i < q; ++i) r *= x;
  return r;
}

// i^q as an exact unit complex number.
cplx i_power(int q) {
  switch (q % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

}  // namespace

SpectralFilter derivative_filter(std::span<const double> freqs, int q) {
  require(q >= 0, "derivative_filter: order must be nonnegative");
  const cplx unit = i_power(q);
  SpectralFilter k;
  k.multipliers.resize(freqs.size());
  for (std::size_t n = 0; n < freqs.size(); ++n) {
    const double mag = ipow(freqs[n], q);
    k.multipliers[n] = cplx(unit.real() * mag, unit.imag() * mag);
  }
  return k;
}

SpectralFilter smoothing_filter(std::span<const double> freqs, double h) {
  require(h > 0.0, "smoothing_filter: spacing must be positive");
  SpectralFilter k;
  k.multipliers.resize(freqs.size());
  for (std::size_t n = 0; n < freqs.size(); ++n) {
    const double z = h * freqs[n];
    k.multipliers[n] = std::exp(-kPi * kPi * z * z / 2.0);
  }
  return k;
}

SpectralFilter2D smoothing_filter_2d(std::span<const double> freqs1, std::span<const double> freqs2,
                                     double h1, double h2) {
  require(h1 > 0.0 && h2 > 0.0, "smoothing_filter_2d: spacings must be positive");
  SpectralFilter2D k;
  k.m1 = freqs1.size();
  k.m2 = freqs2.size();
  k.multipliers.resize(k.m1 * k.m2);
  for (std::size_t i1 = 0; i1 < k.m1; ++i1) {
    const double z1 = h1 * freqs1[i1];
    for (std::size_t i2 = 0; i2 < k.m2; ++i2) {
      const double z2 = h2 * freqs2[i2];
      k.multipliers[i1 * k.m2 + i2] = std::exp(-kPi * kPi * (z1 * z1 + z2 * z2) / 2.0);
    }
  }
  return k;
}

SpectralFilter derivative_chain(std::size_t n, double domain_length, int q, bool smooth) {
  const std::vector<double> xi = frequency_vector(n, domain_length);
  SpectralFilter k = derivative_filter(xi, q);
  if (q % 2 == 1 && n % 2 == 0) k.multipliers[n / 2] = 0.0;
  if (smooth) {
    const SpectralFilter s = smoothing_filter(xi, domain_length / static_cast<double>(n));
    k = compose(k, s);
  }
  return k;
}

std::vector<double> spectral_derivative(const Grid1D& g, int q, const DerivativeOptions& options) {
  require(q >= 0, "spectral_derivative: order must be nonnegative");
  Spectrum s = fft_forward(g);
  truncate_below(s.coeffs, options.roundoff_floor);
  const SpectralFilter k = derivative_chain(g.size(), g.domain.length(), q, options.smooth);
  simd::multiply(k.multipliers, s.coeffs, s.coeffs);
  return fft_inverse(s);
}

ConcentrationFactor::ConcentrationFactor(double alpha) : alpha_(alpha) {
  require(alpha > 0.0, "concentration factor: alpha must be positive");
  auto integrand = [alpha](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(1.0 / (alpha * t * (t - 1.0)));
  };
  c_alpha_ = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
}

double ConcentrationFactor::imag(double eta) const {
  require(eta >= 0.0 && eta <= 1.0, "concentration factor: eta = " + std::to_string(eta) + " is outside [0, 1]");
  if (eta == 0.0 || eta == 1.0) return 0.0;
  return 2.0 * kPi / c_alpha_ * eta * std::exp(1.0 / (alpha_ * eta * (eta - 1.0)));
}

SpectralFilter jump_filter(std::size_t m, double alpha) {
  require(m >= 2, "jump_filter: need at least 2 samples");
  const ConcentrationFactor sigma(alpha);
  const double md = static_cast<double>(m);
  SpectralFilter k;
  k.multipliers.assign(m, cplx(0.0, 0.0));
  // Fill positive modes and mirror, so K(-k) = -K(k) holds exactly.
  for (std::size_t n = 1; n < m; ++n) {
    const long kk = signed_mode(n, m);
    if (kk <= 0) continue;
    const double ks = static_cast<double>(kk);
    const double eta = std::min(1.0, 2.0 * ks / md);
    const double v = sigma.imag(eta) * sinc(kPi * ks / md);
    k.multipliers[n] = cplx(0.0, v);
    k.multipliers[m - n] = cplx(0.0, -v);
  }
  return k;
}

}  // namespace specknot
