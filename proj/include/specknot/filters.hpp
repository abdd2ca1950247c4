#pragma once
// Spectral filter families: differentiation, Gaussian smoothing, and the
// exponential concentration filter used for jump detection.

#include <cstddef>
#include <span>
#include <vector>

#include "specknot/spectral.hpp"

namespace specknot {

/// (i xi)^q per mode. Exactly conjugate-symmetric for symmetric frequencies.
SpectralFilter derivative_filter(std::span<const double> freqs, int q);

/// exp(-pi^2 h^2 xi^2 / 2) per mode.
SpectralFilter smoothing_filter(std::span<const double> freqs, double h);

/// Outer product of the two 1D smoothing filters, row-major m1 x m2.
SpectralFilter2D smoothing_filter_2d(std::span<const double> freqs1, std::span<const double> freqs2,
                                     double h1, double h2);

struct DerivativeOptions {
  /// Chain the Gaussian smoothing filter (h = grid spacing) before differentiating.
  bool smooth = false;
  /// Coefficients with |F| <= roundoff_floor * max|F| are dropped before
  /// differentiation; (xi)^q would otherwise amplify sample roundoff.
  /// Set to 0 to differentiate the raw spectrum.
  double roundoff_floor = 1e-13;
};

/// The full multiplier chain used by spectral_derivative for a signal of n
/// samples on a domain of the given length: (i xi)^q with the Nyquist mode
/// zeroed for odd q on even n, times the smoothing filter when requested.
SpectralFilter derivative_chain(std::size_t n, double domain_length, int q, bool smooth);

std::vector<double> spectral_derivative(const Grid1D& g, int q, const DerivativeOptions& options = {});

/// Exponential concentration factor
///   sigma(eta) = (2 pi i / c) eta exp(1 / (alpha eta (eta - 1))),  0 < eta < 1,
/// with sigma(0) = sigma(1) = 0 and c = int_0^1 exp(1 / (alpha t (t - 1))) dt.
class ConcentrationFactor {
 public:
  explicit ConcentrationFactor(double alpha = 6.0);

  double alpha() const noexcept { return alpha_; }
  double normalization() const noexcept { return c_alpha_; }
  /// Imaginary part of sigma(eta); the real part is identically zero.
  double imag(double eta) const;
  cplx operator()(double eta) const { return {0.0, imag(eta)}; }

 private:
  double alpha_;
  double c_alpha_;
};

/// sign(k) sigma(|2k/m|) sinc(pi k/m) over the signed mode indices k of an
/// m-sample signal. Purely imaginary and odd in k.
SpectralFilter jump_filter(std::size_t m, double alpha = 6.0);

}  // namespace specknot
