#pragma once
// Knot placement methods and the end-to-end fit.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "specknot/bspline.hpp"
#include "specknot/jumps.hpp"
#include "specknot/knots.hpp"

namespace specknot {

/// uniform: equal spans. di_f: feature CDF of the spectral q-th derivative.
/// di_fs: as di_f on the smoothed spectrum. di_fj: high-multiplicity knots at
/// detected jumps, remaining knots as di_fs.
enum class Method { Uniform, DiF, DiFS, DiFJ };

std::string_view to_string(Method method) noexcept;
/// Accepts "uniform", "di_f", "di_fs", "di_fj" (dashes also accepted).
Method parse_method(std::string_view name);

struct PlacementOptions {
  Method method = Method::DiF;
  int order = 4;
  std::optional<double> threshold;  ///< jump threshold; default_threshold(samples) when unset
  std::size_t window = 5;
  double alpha = 6.0;
};

/// Wall-clock seconds per stage.
struct StageTimings {
  double transform = 0.0;
  double filter = 0.0;
  double knots = 0.0;
  double solve = 0.0;
};

struct Placement {
  KnotVector knots;
  JumpReport jumps;  ///< detected jumps (di_fj only)
  StageTimings timings;
};

/// n is the control-point count; the knot vector has n + q entries.
Placement place_knots(const Grid1D& g, std::size_t n, const PlacementOptions& options);

struct FitResult {
  Placement placement;
  Fit1D fit;
};

FitResult fit_signal(const Grid1D& g, std::size_t n, const PlacementOptions& options);

struct Placement2D {
  KnotVector knots1;
  KnotVector knots2;
  StageTimings timings;
};

struct FitResult2D {
  Placement2D placement;
  Fit2D fit;
};

FitResult2D fit_signal_2d(const Grid2D& g, std::size_t n1, std::size_t n2, const PlacementOptions& options,
                          std::array<bool, 2> periodic = {true, true});

}  // namespace specknot
