#include "specknot/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "specknot/error.hpp"
#include "specknot/filters.hpp"
#include "specknot/simd/kernels.hpp"

namespace specknot {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kSpectralFloor = 1e-13;

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Uniform: return "uniform";
    case Method::DiF: return "di_f";
    case Method::DiFS: return "di_fs";
    case Method::DiFJ: return "di_fj";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Method m : {Method::Uniform, Method::DiF, Method::DiFS, Method::DiFJ}) {
    if (s == to_string(m)) return m;
  }
  fail(ErrorKind::InvalidInput, "unknown method '" + std::string(name) + "' (expected uniform, di_f, di_fs or di_fj)");
}

Placement place_knots(const Grid1D& g, std::size_t n, const PlacementOptions& options) {
  require(options.order >= 2, "place_knots: order must be at least 2");
  const int q = options.order;
  require(n >= static_cast<std::size_t>(q), "place_knots: control count " + std::to_string(n) +
                                                " is below the order " + std::to_string(q));
  StageTimings t;
  if (options.method == Method::Uniform) {
    const auto t0 = Clock::now();
    KnotVector k = uniform_knots(n, q);
    t.knots = seconds_since(t0);
    return {std::move(k), {}, t};
  }
  require(g.size() >= 4, "place_knots: derivative-informed placement needs at least 4 samples");
  const bool smooth = options.method != Method::DiF;

  auto t0 = Clock::now();
  std::vector<cplx> coeffs = dft_forward(g.samples);
  t.transform += seconds_since(t0);

  t0 = Clock::now();
  std::vector<cplx> work = coeffs;
  truncate_below(work, kSpectralFloor);
  const SpectralFilter chain = derivative_chain(g.size(), g.domain.length(), q, smooth);
  simd::multiply(chain.multipliers, work, work);
  t.filter += seconds_since(t0);

  t0 = Clock::now();
  const std::vector<double> deriv = dft_inverse(work);
  t.transform += seconds_since(t0);

  JumpReport jumps;
  if (options.method == Method::DiFJ) {
    t0 = Clock::now();
    std::vector<cplx> jc = coeffs;
    const SpectralFilter kj = jump_filter(g.size(), options.alpha);
    simd::multiply(kj.multipliers, jc, jc);
    t.filter += seconds_since(t0);
    t0 = Clock::now();
    const std::vector<double> J = dft_inverse(jc);
    t.transform += seconds_since(t0);
    t0 = Clock::now();
    const double l = options.threshold.value_or(default_threshold(g.samples));
    jumps = classify_jumps(J, {l, options.window, options.alpha});
    t.filter += seconds_since(t0);
  }

  t0 = Clock::now();
  const FeatureCdf G = feature_cdf(feature_function(deriv, q));
  KnotVector k = [&] {
    if (options.method != Method::DiFJ) return knots_from_cdf(G, n, q);
    JumpReport inside = jumps;
    // Jumps on the periodic seam coincide with the clamped ends.
    std::erase_if(inside.entries, [](const JumpEntry& e) { return !(e.u > 0.0 && e.u < 1.0); });
    return merge_jump_knots(G, inside, n, q);
  }();
  t.knots = seconds_since(t0);
  return {std::move(k), std::move(jumps), t};
}

FitResult fit_signal(const Grid1D& g, std::size_t n, const PlacementOptions& options) {
  Placement p = place_knots(g, n, options);
  const auto t0 = Clock::now();
  Fit1D fit = fit_least_squares(g, p.knots);
  p.timings.solve = seconds_since(t0);
  return {std::move(p), std::move(fit)};
}

FitResult2D fit_signal_2d(const Grid2D& g, std::size_t n1, std::size_t n2, const PlacementOptions& options,
                          std::array<bool, 2> periodic) {
  require(options.order >= 2, "fit_signal_2d: order must be at least 2");
  const int q = options.order;
  StageTimings t;
  auto t0 = Clock::now();
  std::pair<KnotVector, KnotVector> kv = [&] {
    if (options.method == Method::Uniform) return std::pair{uniform_knots(n1, q), uniform_knots(n2, q)};
    Knots2DOptions o;
    o.smooth = options.method != Method::DiF;
    o.jumps = options.method == Method::DiFJ;
    o.periodic = periodic;
    o.threshold = options.threshold;
    o.window = options.window;
    o.alpha = options.alpha;
    return knots_2d(g, n1, n2, q, o);
  }();
  t.knots = seconds_since(t0);
  t0 = Clock::now();
  Fit2D fit = fit_tensor(g, kv.first, kv.second);
  t.solve = seconds_since(t0);
  return {Placement2D{std::move(kv.first), std::move(kv.second), t}, std::move(fit)};
}

}  // namespace specknot
