#pragma once
// Knot vectors: uniform baseline, feature-CDF placement, jump-aware merging,
// and the per-dimension 2D pipeline.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specknot/jumps.hpp"
#include "specknot/spectral.hpp"

namespace specknot {

/// Clamped knot vector on [0, 1] with n + q entries.
class KnotVector {
 public:
  /// Validates length, clamping, monotonicity and interior multiplicity <= q.
  KnotVector(std::vector<double> knots, int order);

  const std::vector<double>& knots() const noexcept { return knots_; }
  int order() const noexcept { return order_; }
  int degree() const noexcept { return order_ - 1; }
  std::size_t control_count() const noexcept { return knots_.size() - static_cast<std::size_t>(order_); }
  std::size_t size() const noexcept { return knots_.size(); }
  double operator[](std::size_t j) const noexcept { return knots_[j]; }
  /// Number of knots exactly equal to `value`.
  std::size_t multiplicity(double value) const noexcept;
  /// Knots strictly between 0 and 1.
  std::vector<double> interior() const;

 private:
  std::vector<double> knots_;
  int order_;
};

/// Discrete CDF of a feature function on the parameters u_i = i / (m - 1).
struct FeatureCdf {
  std::vector<double> u;
  std::vector<double> G;

  /// Piecewise-linear G^{-1}(t) for t in [0, 1].
  double inverse(double t) const;
  /// Piecewise-linear G(u).
  double operator()(double u_value) const;
};

/// |d|^(1/q) pointwise.
std::vector<double> feature_function(std::span<const double> deriv, int q);

/// Trapezoid CDF of F normalized to [0, 1], then G_eps = (G + eps u) / (1 + eps).
FeatureCdf feature_cdf(std::span<const double> F, double eps);
/// As above with eps = 1 / (1000 m).
FeatureCdf feature_cdf(std::span<const double> F);

/// k_j = G^{-1}((j - q + 1) / (n - q + 1)) for q <= j < n.
KnotVector knots_from_cdf(const FeatureCdf& G, std::size_t n, int q);

KnotVector uniform_knots(std::size_t n, int q);

/// Multiplicity-q knots at C0 jumps and multiplicity-(q-1) knots at C1 jumps,
/// counted inside the budget n; the remaining interior knots come from G.
/// CDF knots closer than half a sample spacing to a jump knot move to the
/// nearest sample midpoint that is not a jump site. Throws Budget when the
/// jump multiplicities exceed n - q.
KnotVector merge_jump_knots(const FeatureCdf& G, const JumpReport& jumps, std::size_t n, int q);

enum class Boundary { OneSided, Periodic };

/// q-fold repeated second-order central differences. OneSided uses
/// second-order one-sided stencils at the two ends.
std::vector<double> finite_difference_derivative(std::span<const double> samples, double h, int q,
                                                 Boundary boundary = Boundary::OneSided);

/// Sum over the other axis of |partial|^(1/q); one value per sample along `axis`.
std::vector<double> collapsed_feature_2d(const Grid2D& partials, int q, Axis axis);

struct Knots2DOptions {
  bool smooth = false;
  bool jumps = false;
  std::array<bool, 2> periodic{true, true};
  std::optional<double> threshold;  ///< default_threshold of the field when unset
  std::size_t window = 5;
  double alpha = 6.0;
};

/// q-th partial derivative along `axis`: spectral on periodic axes, finite
/// differences otherwise. Smoothing, when enabled, acts along periodic axes.
Grid2D partial_derivative_2d(const Grid2D& g, int q, Axis axis, const Knots2DOptions& options);

std::pair<KnotVector, KnotVector> knots_2d(const Grid2D& g, std::size_t n1, std::size_t n2, int q,
                                           const Knots2DOptions& options = {});

}  // namespace specknot
