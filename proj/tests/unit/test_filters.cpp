#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "specknot/datagen.hpp"
#include "specknot/error.hpp"
#include "specknot/filters.hpp"
#include "specknot/knots.hpp"

using namespace specknot;

namespace {

constexpr double kPi = std::numbers::pi;

Grid1D sampled(std::size_t n, auto&& f) {
  Grid1D g{std::vector<double>(n), {}};
  for (std::size_t i = 0; i < n; ++i) g.samples[i] = f(g.x(i));
  return g;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(DerivativeFilter, Examples) {
  const auto freqs = frequency_vector(8, 1.0);
  for (auto z : derivative_filter(freqs, 0).multipliers) EXPECT_EQ(z, cplx(1.0));
  for (int q = 1; q <= 6; ++q) EXPECT_EQ(std::abs(derivative_filter(freqs, q).multipliers[0]), 0.0);
  const std::vector<double> xi{2 * kPi};
  const cplx k = derivative_filter(xi, 2).multipliers[0];
  EXPECT_DOUBLE_EQ(k.real(), -4 * kPi * kPi);
  EXPECT_EQ(k.imag(), 0.0);
  EXPECT_THROW(derivative_filter(freqs, -1), Error);
}

TEST(DerivativeFilter, OrdersCompose) {
  const auto freqs = frequency_vector(11, 3.0);
  for (int q1 = 0; q1 <= 3; ++q1) {
    for (int q2 = 0; q2 <= 3; ++q2) {
      const auto a = compose(derivative_filter(freqs, q1), derivative_filter(freqs, q2));
      const auto b = derivative_filter(freqs, q1 + q2);
      for (std::size_t k = 0; k < freqs.size(); ++k) {
        EXPECT_LT(std::abs(a.multipliers[k] - b.multipliers[k]), 1e-12 * std::max(1.0, std::abs(b.multipliers[k])));
      }
    }
  }
}

TEST(DerivativeFilter, ConjugateSymmetricExactly) {
  const auto freqs = frequency_vector(9, 1.0);
  for (int q = 0; q <= 7; ++q) {
    const auto k = derivative_filter(freqs, q);
    for (std::size_t n = 1; n < 9; ++n) EXPECT_EQ(k.multipliers[9 - n], std::conj(k.multipliers[n]));
  }
}

TEST(SpectralDerivative, SineExamples) {
  const auto g = sampled(64, [](double x) { return std::sin(2 * kPi * x); });
  const auto d1 = spectral_derivative(g, 1);
  const auto d2 = spectral_derivative(g, 2);
  const auto d0 = spectral_derivative(g, 0);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_LT(std::abs(d1[i] - 2 * kPi * std::cos(2 * kPi * g.x(i))), 1e-10);
    EXPECT_LT(std::abs(d2[i] + 4 * kPi * kPi * std::sin(2 * kPi * g.x(i))), 1e-9);
    EXPECT_LT(std::abs(d0[i] - g.samples[i]), 1e-12);
  }
}

TEST(SpectralDerivative, ExpSinSixthOrderAgainstClosedForm) {
  const auto g = sampled(500, [](double x) { return std::exp(std::sin(2 * kPi * x)); });
  const auto d = spectral_derivative(g, 6);
  std::vector<double> exact(500);
  for (std::size_t i = 0; i < 500; ++i) exact[i] = oracle::expsin_derivative(g.x(i), 6);
  double err = 0.0;
  for (std::size_t i = 0; i < 500; ++i) err = std::max(err, std::abs(d[i] - exact[i]));
  EXPECT_LT(err / max_abs(exact), 1e-6);
}

TEST(SpectralDerivative, RespectsDomainLength) {
  Grid1D g{std::vector<double>(40), {2.0, 6.0}};
  for (std::size_t i = 0; i < 40; ++i) g.samples[i] = std::cos(2 * kPi * (g.x(i) - 2.0) / 4.0);
  const auto d = spectral_derivative(g, 1);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_NEAR(d[i], -2 * kPi / 4.0 * std::sin(2 * kPi * (g.x(i) - 2.0) / 4.0), 1e-12);
  }
}

TEST(SpectralDerivative, NyquistZeroedForOddOrders) {
  const auto k = derivative_chain(8, 1.0, 3, false);
  EXPECT_EQ(std::abs(k.multipliers[4]), 0.0);
  EXPECT_NE(std::abs(derivative_chain(8, 1.0, 2, false).multipliers[4]), 0.0);
  EXPECT_NE(std::abs(derivative_chain(9, 1.0, 3, false).multipliers[4]), 0.0);
}

TEST(SmoothingFilter, Examples) {
  const auto freqs = frequency_vector(64, 1.0);
  const double h = 1.0 / 64;
  const auto k = smoothing_filter(freqs, h);
  EXPECT_EQ(k.multipliers[0], cplx(1.0));
  for (std::size_t a = 0; a < 64; ++a) {
    EXPECT_GT(k.multipliers[a].real(), 0.0);
    EXPECT_LE(k.multipliers[a].real(), 1.0);
    EXPECT_EQ(k.multipliers[a].imag(), 0.0);
    for (std::size_t b = 0; b < 64; ++b) {
      if (std::abs(freqs[a]) < std::abs(freqs[b])) {
        EXPECT_GE(k.multipliers[a].real(), k.multipliers[b].real());
      }
    }
  }
  // pi^2 h^2 xi^2 / 2 = 2 at xi = 2 / (pi h)
  const std::vector<double> xi{2.0 / (kPi * 0.1)};
  EXPECT_NEAR(smoothing_filter(xi, 0.1).multipliers[0].real(), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(std::exp(-2.0), 0.1353, 1e-4);
  EXPECT_THROW(smoothing_filter(freqs, 0.0), Error);
}

TEST(SmoothingFilter, TwoDimensionalSeparable) {
  const auto f1 = frequency_vector(12, 1.0);
  const auto f2 = frequency_vector(9, 2.0);
  const auto k = smoothing_filter_2d(f1, f2, 0.05, 0.2);
  const auto k1 = smoothing_filter(f1, 0.05);
  const auto k2 = smoothing_filter(f2, 0.2);
  EXPECT_EQ(k.multipliers[0], 1.0);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      EXPECT_NEAR(k.multipliers[i * 9 + j], k1.multipliers[i].real() * k2.multipliers[j].real(), 1e-15);
    }
  }
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  Grid2D g{12, 9, std::vector<double>(108), {}, {0.0, 2.0}};
  for (auto& x : g.samples) x = d(rng);
  const auto s = fft_forward_2d(g);
  const auto f = apply_filter_2d(s, k);
  for (std::size_t n = 0; n < s.coeffs.size(); ++n) EXPECT_LE(std::abs(f.coeffs[n]), std::abs(s.coeffs[n]));
}

// Smoothing then differentiating inside one filter chain equals differentiating
// a signal that was explicitly smoothed first. The explicit route carries one
// extra transform round trip whose roundoff is amplified by |xi|^q, so beyond
// first order the tolerance is taken relative to max|xi|^q * max|f|.
TEST(SmoothingFilter, ChainCommutesWithExplicitSmoothing) {
  const std::size_t n = 256;
  const SignalSpec base{SmoothPeriodic{Formula::ExpSin, 1.0, 0.05, 0.5}};
  const SignalSpec noisy{Noisy{std::make_shared<const SignalSpec>(base), 0.01, 42}};
  const Grid1D g = generate(noisy, n);
  const auto freqs = frequency_vector(n, 1.0);
  const auto smoothed =
      fft_inverse(apply_filter(fft_forward(g), smoothing_filter(freqs, g.spacing())));
  const Grid1D gs{smoothed, g.domain};
  const double xi_max = *std::max_element(freqs.begin(), freqs.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  for (int q = 1; q <= 4; ++q) {
    const auto chained = spectral_derivative(g, q, {.smooth = true, .roundoff_floor = 0.0});
    const auto explicit_ = spectral_derivative(gs, q, {.smooth = false, .roundoff_floor = 0.0});
    const double scale = q == 1 ? max_abs(chained) : std::pow(std::abs(xi_max), q) * max_abs(smoothed);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(chained[i] - explicit_[i]), 1e-12 * scale) << q;
  }
}

TEST(SmoothingFilter, TailModesOfNoisySignalShrink) {
  const std::size_t n = 200;
  const auto noise = gaussian_noise(n, 5);
  const Grid1D g{noise, {}};
  const auto s = fft_forward(g);
  const auto f = apply_filter(s, smoothing_filter(frequency_vector(n, 1.0), g.spacing()));
  for (std::size_t k = n / 4; k < 3 * n / 4; ++k) EXPECT_LT(std::abs(f.coeffs[k]), std::abs(s.coeffs[k])) << k;
}

TEST(ConcentrationFactor, EndpointsAndNormalization) {
  const ConcentrationFactor c(6.0);
  EXPECT_EQ(c(0.0), cplx(0.0));
  EXPECT_EQ(c(1.0), cplx(0.0));
  EXPECT_EQ(c(0.5).real(), 0.0);
  EXPECT_GT(c(0.5).imag(), 0.0);
  // Stated value is "approximately 0.34"; accept 5%.
  EXPECT_NEAR(c.normalization(), 0.34, 0.05 * 0.34);
  // Frozen from the composite Simpson oracle.
  EXPECT_NEAR(oracle::c_alpha_simpson(6.0), 0.3420057, 1e-6);
  EXPECT_NEAR(c.normalization(), oracle::c_alpha_simpson(6.0), 1e-9);
  EXPECT_NEAR(ConcentrationFactor(2.0).normalization(), oracle::c_alpha_simpson(2.0), 1e-9);
  EXPECT_THROW(c.imag(-0.01), Error);
  EXPECT_THROW(c.imag(1.01), Error);
  EXPECT_THROW(ConcentrationFactor(0.0), Error);
}

TEST(JumpFilter, Structure) {
  for (std::size_t m : {16u, 17u, 600u}) {
    const auto k = jump_filter(m);
    const auto modes = signed_modes(m);
    EXPECT_EQ(k.multipliers[0], cplx(0.0));
    for (std::size_t n = 0; n < m; ++n) {
      EXPECT_EQ(k.multipliers[n].real(), 0.0);
      if (n > 0) {
        EXPECT_EQ(k.multipliers[m - n], -k.multipliers[n]) << m << " " << n;
      }
      if (2 * static_cast<std::size_t>(std::abs(modes[n])) == m) {
        EXPECT_EQ(k.multipliers[n], cplx(0.0));
      }
    }
  }
}

TEST(JumpFilter, IndicatorIsRealForRealInput) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  for (std::size_t m : {64u, 65u}) {
    Grid1D g{std::vector<double>(m), {}};
    for (auto& x : g.samples) x = d(rng);
    EXPECT_NO_THROW(fft_inverse(apply_filter(fft_forward(g), jump_filter(m))));
  }
}
