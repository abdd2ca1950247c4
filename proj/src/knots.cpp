#include "specknot/knots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specknot/error.hpp"
#include "specknot/filters.hpp"
#include "specknot/simd/kernels.hpp"

namespace specknot {
namespace {

constexpr double kSpectralFloor = 1e-13;

// Per-strand 1D spectral filtering along `axis`.
Grid2D filter_strands_1d(const Grid2D& g, Axis axis, const SpectralFilter& k, double floor) {
  const std::size_t m = g.extent(axis);
  const std::size_t strands = axis == Axis::First ? g.m2 : g.m1;
  Grid2D out = g;
  std::vector<double> strand(m);
  for (std::size_t t = 0; t < strands; ++t) {
    for (std::size_t i = 0; i < m; ++i) strand[i] = axis == Axis::First ? g.at(i, t) : g.at(t, i);
    std::vector<cplx> coeffs = dft_forward(strand);
    truncate_below(coeffs, floor);
    simd::multiply(k.multipliers, coeffs, coeffs);
    const std::vector<double> filtered = dft_inverse(coeffs);
    for (std::size_t i = 0; i < m; ++i) {
      (axis == Axis::First ? out.at(i, t) : out.at(t, i)) = filtered[i];
    }
  }
  return out;
}

Axis other(Axis axis) { return axis == Axis::First ? Axis::Second : Axis::First; }
std::size_t slot(Axis axis) { return axis == Axis::First ? 0 : 1; }

}  // namespace

KnotVector::KnotVector(std::vector<double> knots, int order) : knots_(std::move(knots)), order_(order) {
  require(order >= 1, "KnotVector: order must be at least 1");
  const std::size_t q = static_cast<std::size_t>(order);
  require(knots_.size() >= 2 * q, "KnotVector: " + std::to_string(knots_.size()) +
                                      " knots cannot hold order " + std::to_string(order));
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    const double k = knots_[j];
    require(std::isfinite(k) && k >= 0.0 && k <= 1.0, "KnotVector: knot " + std::to_string(j) + " outside [0, 1]");
    if (j > 0) require(k >= knots_[j - 1], "KnotVector: knots must be nondecreasing");
  }
  require(multiplicity(0.0) == q && multiplicity(1.0) == q,
          "KnotVector: ends must be clamped with exactly " + std::to_string(q) + " repeated knots");
  std::size_t run = 1;
  for (std::size_t j = 1; j < knots_.size(); ++j) {
    run = knots_[j] == knots_[j - 1] ? run + 1 : 1;
    require(run <= q, "KnotVector: interior knot " + std::to_string(knots_[j]) + " exceeds multiplicity " +
                          std::to_string(q));
  }
}

std::size_t KnotVector::multiplicity(double value) const noexcept {
  return static_cast<std::size_t>(std::count(knots_.begin(), knots_.end(), value));
}

std::vector<double> KnotVector::interior() const {
  std::vector<double> out;
  for (double k : knots_) {
    if (k > 0.0 && k < 1.0) out.push_back(k);
  }
  return out;
}

double FeatureCdf::inverse(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const auto it = std::upper_bound(G.begin(), G.end(), t);
  if (it == G.begin()) return u.front();
  if (it == G.end()) return u.back();
  const std::size_t j = static_cast<std::size_t>(it - G.begin());
  const double g0 = G[j - 1];
  const double g1 = G[j];
  const double s = (t - g0) / (g1 - g0);
  return u[j - 1] + s * (u[j] - u[j - 1]);
}

double FeatureCdf::operator()(double u_value) const {
  u_value = std::clamp(u_value, 0.0, 1.0);
  const auto it = std::upper_bound(u.begin(), u.end(), u_value);
  if (it == u.begin()) return G.front();
  if (it == u.end()) return G.back();
  const std::size_t j = static_cast<std::size_t>(it - u.begin());
  const double s = (u_value - u[j - 1]) / (u[j] - u[j - 1]);
  return G[j - 1] + s * (G[j] - G[j - 1]);
}

std::vector<double> feature_function(std::span<const double> deriv, int q) {
  require(q >= 1, "feature_function: order must be at least 1");
  std::vector<double> F(deriv.size());
  const double inv = 1.0 / static_cast<double>(q);
  for (std::size_t i = 0; i < deriv.size(); ++i) {
    const double a = std::abs(deriv[i]);
    F[i] = q == 1 ? a : (q == 2 ? std::sqrt(a) : (q == 3 ? std::cbrt(a) : std::pow(a, inv)));
  }
  return F;
}

FeatureCdf feature_cdf(std::span<const double> F, double eps) {
  const std::size_t m = F.size();
  require(m >= 2, "feature_cdf: need at least 2 samples");
  require(eps > 0.0, "feature_cdf: eps must be positive");
  FeatureCdf cdf;
  cdf.u.resize(m);
  cdf.G.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) cdf.u[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    require(F[i] >= 0.0, "feature_cdf: feature value at " + std::to_string(i) + " is negative or not a number");
  }
  for (std::size_t i = 1; i < m; ++i) {
    cdf.G[i] = cdf.G[i - 1] + 0.5 * (F[i] + F[i - 1]) * (cdf.u[i] - cdf.u[i - 1]);
  }
  const double total = cdf.G.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    require(std::isfinite(total), "feature_cdf: feature integral is not finite");
    cdf.G = cdf.u;
    return cdf;
  }
  for (std::size_t i = 0; i < m; ++i) cdf.G[i] = (cdf.G[i] / total + eps * cdf.u[i]) / (1.0 + eps);
  cdf.G.back() = 1.0;
  return cdf;
}

FeatureCdf feature_cdf(std::span<const double> F) {
  return feature_cdf(F, 1.0 / (1000.0 * static_cast<double>(F.size())));
}

KnotVector knots_from_cdf(const FeatureCdf& G, std::size_t n, int q) {
  require(q >= 1, "knots_from_cdf: order must be at least 1");
  const std::size_t qq = static_cast<std::size_t>(q);
  require(n >= qq, "knots_from_cdf: control count " + std::to_string(n) + " is below the order " + std::to_string(q));
  std::vector<double> k(n + qq, 0.0);
  const double spans = static_cast<double>(n - qq + 1);
  for (std::size_t j = qq; j < n; ++j) k[j] = G.inverse(static_cast<double>(j - qq + 1) / spans);
  for (std::size_t j = n; j < n + qq; ++j) k[j] = 1.0;
  return KnotVector(std::move(k), q);
}

KnotVector uniform_knots(std::size_t n, int q) {
  require(q >= 1, "uniform_knots: order must be at least 1");
  const std::size_t qq = static_cast<std::size_t>(q);
  require(n >= qq, "uniform_knots: control count " + std::to_string(n) + " is below the order " + std::to_string(q));
  std::vector<double> k(n + qq, 0.0);
  const double spans = static_cast<double>(n - qq + 1);
  for (std::size_t j = qq; j < n; ++j) k[j] = static_cast<double>(j - qq + 1) / spans;
  for (std::size_t j = n; j < n + qq; ++j) k[j] = 1.0;
  return KnotVector(std::move(k), q);
}

KnotVector merge_jump_knots(const FeatureCdf& G, const JumpReport& jumps, std::size_t n, int q) {
  require(q >= 2, "merge_jump_knots: order must be at least 2");
  const std::size_t qq = static_cast<std::size_t>(q);
  require(n >= qq, "merge_jump_knots: control count " + std::to_string(n) + " is below the order " + std::to_string(q));
  const std::size_t m = G.u.size();
  require(m >= 2, "merge_jump_knots: empty feature CDF");

  struct Site {
    double u;
    std::size_t mult;
  };
  std::vector<Site> sites;
  for (const JumpEntry& e : jumps.entries) {
    require(e.u > 0.0 && e.u < 1.0, "merge_jump_knots: jump location " + std::to_string(e.u) + " is not inside (0, 1)");
    const std::size_t mult = e.kind == JumpKind::C0 ? qq : qq - 1;
    auto it = std::find_if(sites.begin(), sites.end(), [&](const Site& s) { return s.u == e.u; });
    if (it != sites.end()) {
      it->mult = std::max(it->mult, mult);
    } else {
      sites.push_back({e.u, mult});
    }
  }
  std::size_t needed = 0;
  for (const Site& s : sites) needed += s.mult;
  const std::size_t slots = n - qq;
  if (needed > slots) {
    fail(ErrorKind::Budget, "knot budget too small: " + std::to_string(n) + " control points leave " +
                                std::to_string(slots) + " interior knots but the jumps need " +
                                std::to_string(needed) + " (short by " + std::to_string(needed - slots) + ")");
  }

  const double cell = 1.0 / static_cast<double>(m - 1);
  const double reach = 0.5 * cell * (1.0 - 1e-9);
  auto near_site = [&](double x) {
    return std::any_of(sites.begin(), sites.end(), [&](const Site& s) { return std::abs(x - s.u) < reach; });
  };

  std::vector<double> interior;
  for (const Site& s : sites) interior.insert(interior.end(), s.mult, s.u);
  const KnotVector base = knots_from_cdf(G, qq + slots - needed, q);
  // Each sample midpoint takes at most one displaced knot.
  std::vector<bool> taken(m - 1, false);
  for (double k : base.interior()) {
    if (near_site(k)) {
      std::size_t best = m;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < m; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * cell;
        if (!taken[i] && std::abs(mid - k) < best_dist && !near_site(mid)) {
          best = i;
          best_dist = std::abs(mid - k);
        }
      }
      if (best < m) {
        taken[best] = true;
        k = (static_cast<double>(best) + 0.5) * cell;
      }
    }
    interior.push_back(k);
  }
  std::sort(interior.begin(), interior.end());
  std::vector<double> knots(qq, 0.0);
  knots.insert(knots.end(), interior.begin(), interior.end());
  knots.insert(knots.end(), qq, 1.0);
  return KnotVector(std::move(knots), q);
}

std::vector<double> finite_difference_derivative(std::span<const double> samples, double h, int q, Boundary boundary) {
  require(q >= 1, "finite_difference_derivative: order must be at least 1");
  require(h > 0.0, "finite_difference_derivative: spacing must be positive");
  const std::size_t n = samples.size();
  require(n > 2 * static_cast<std::size_t>(q), "finite_difference_derivative: " + std::to_string(n) +
                                                   " samples are too few for order " + std::to_string(q));
  std::vector<double> cur(samples.begin(), samples.end());
  std::vector<double> next(n);
  const double inv = 1.0 / (2.0 * h);
  for (int pass = 0; pass < q; ++pass) {
    for (std::size_t i = 1; i + 1 < n; ++i) next[i] = (cur[i + 1] - cur[i - 1]) * inv;
    if (boundary == Boundary::Periodic) {
      next[0] = (cur[1] - cur[n - 1]) * inv;
      next[n - 1] = (cur[0] - cur[n - 2]) * inv;
    } else {
      next[0] = (-3.0 * cur[0] + 4.0 * cur[1] - cur[2]) * inv;
      next[n - 1] = (3.0 * cur[n - 1] - 4.0 * cur[n - 2] + cur[n - 3]) * inv;
    }
    std::swap(cur, next);
  }
  return cur;
}

std::vector<double> collapsed_feature_2d(const Grid2D& partials, int q, Axis axis) {
  partials.validate();
  const std::vector<double> F = feature_function(partials.samples, q);
  std::vector<double> out(partials.extent(axis), 0.0);
  for (std::size_t i1 = 0; i1 < partials.m1; ++i1) {
    for (std::size_t i2 = 0; i2 < partials.m2; ++i2) {
      out[axis == Axis::First ? i1 : i2] += F[i1 * partials.m2 + i2];
    }
  }
  return out;
}

Grid2D partial_derivative_2d(const Grid2D& g, int q, Axis axis, const Knots2DOptions& options) {
  g.validate();
  require(q >= 0, "partial_derivative_2d: order must be nonnegative");
  const Axis cross = other(axis);
  const bool along_periodic = options.periodic[slot(axis)];
  const bool cross_periodic = options.periodic[slot(cross)];

  if (along_periodic && cross_periodic) {
    Spectrum2D s = fft_forward_2d(g);
    truncate_below(s.coeffs, kSpectralFloor);
    apply_filter_strands_inplace(s, derivative_chain(g.extent(axis), g.domain(axis).length(), q, options.smooth), axis);
    if (options.smooth) {
      const std::size_t mc = g.extent(cross);
      const double lc = g.domain(cross).length();
      apply_filter_strands_inplace(s, smoothing_filter(frequency_vector(mc, lc), lc / static_cast<double>(mc)), cross);
    }
    Grid2D out = g;
    out.samples = fft_inverse_2d(s);
    return out;
  }

  Grid2D work = g;
  if (options.smooth && cross_periodic) {
    const std::size_t mc = g.extent(cross);
    const double lc = g.domain(cross).length();
    work = filter_strands_1d(work, cross, smoothing_filter(frequency_vector(mc, lc), lc / static_cast<double>(mc)), 0.0);
  }
  if (along_periodic) {
    return filter_strands_1d(work, axis, derivative_chain(g.extent(axis), g.domain(axis).length(), q, options.smooth),
                             kSpectralFloor);
  }
  if (q == 0) return work;
  const std::size_t m = g.extent(axis);
  const double h = g.domain(axis).length() / static_cast<double>(m);
  const std::size_t strands = axis == Axis::First ? g.m2 : g.m1;
  Grid2D out = work;
  std::vector<double> strand(m);
  for (std::size_t t = 0; t < strands; ++t) {
    for (std::size_t i = 0; i < m; ++i) strand[i] = axis == Axis::First ? work.at(i, t) : work.at(t, i);
    const std::vector<double> d = finite_difference_derivative(strand, h, q, Boundary::OneSided);
    for (std::size_t i = 0; i < m; ++i) (axis == Axis::First ? out.at(i, t) : out.at(t, i)) = d[i];
  }
  return out;
}

std::pair<KnotVector, KnotVector> knots_2d(const Grid2D& g, std::size_t n1, std::size_t n2, int q,
                                           const Knots2DOptions& options) {
  g.validate();
  require(q >= 1, "knots_2d: order must be at least 1");
  const std::size_t qq = static_cast<std::size_t>(q);
  require(n1 >= qq && n2 >= qq, "knots_2d: control counts must be at least the order");
  const double threshold = options.threshold.value_or(default_threshold(g.samples));

  auto one_axis = [&](Axis axis, std::size_t n) {
    const Grid2D partial = partial_derivative_2d(g, q, axis, options);
    const FeatureCdf G = feature_cdf(collapsed_feature_2d(partial, q, axis));
    if (!(options.jumps && options.periodic[slot(axis)])) return knots_from_cdf(G, n, q);
    const Grid2D indicator = jump_indicator_2d(g, axis, options.alpha);
    JumpReport report = classify_jumps_2d(indicator, axis, {threshold, options.window, options.alpha});
    std::erase_if(report.entries, [](const JumpEntry& e) { return !(e.u > 0.0 && e.u < 1.0); });
    return merge_jump_knots(G, report, n, q);
  };
  return {one_axis(Axis::First, n1), one_axis(Axis::Second, n2)};
}

}  // namespace specknot
