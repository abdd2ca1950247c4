#pragma once
// Synthetic test signals with queryable ground truth, and grid file loading.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specknot/jumps.hpp"
#include "specknot/spectral.hpp"

namespace specknot {

/// Smooth periodic formulas in the normalized coordinate s = (x - a) / (b - a).
enum class Formula {
  Constant,  ///< amplitude
  Sine,      ///< amplitude * sin(2 pi s)
  ExpSin,    ///< amplitude * exp(sin(2 pi s))
  SineSum,   ///< amplitude * (sin(2 pi s) + cos(4 pi s) / 2 + sin(6 pi s) / 4)
  Peak,      ///< amplitude * exp(-(sin(pi (s - center)) / width)^2)
};

struct SmoothPeriodic {
  Formula formula = Formula::ExpSin;
  double amplitude = 1.0;
  double width = 0.05;
  double center = 0.5;
};

/// A C0 jump adds size * (1/2 - frac(s - location)), a step of +size at the
/// location. A C1 jump adds size * (t/2 - t^2/2 - 1/12) with t = frac(s - location),
/// a slope change of +size (per unit s) with no step.
struct JumpSpec {
  double location = 0.5;
  JumpKind kind = JumpKind::C0;
  double size = 1.0;
};

struct Piecewise {
  SmoothPeriodic base;
  std::vector<JumpSpec> jumps;
};

struct SignalSpec;

/// base + scale * N(0, 1) white noise from a seeded generator.
struct Noisy {
  std::shared_ptr<const SignalSpec> base;
  double scale = 0.0;
  std::optional<std::uint64_t> seed;
};

/// Real spherical-harmonic modes weight * Y_l^m on theta = 2 pi s1, phi = 2 pi s2.
/// The associated Legendre factor uses signed sin(theta) so the field is
/// smooth and periodic in both coordinates.
struct HarmonicMode {
  int l = 0;
  int m = 0;
  double weight = 1.0;
};

struct Harmonic2D {
  std::vector<HarmonicMode> modes;
};

enum class Layout { CsvXY, CsvGrid, RawRows };

struct FileLayout {
  Layout kind = Layout::CsvXY;
  std::size_t rows = 0;  ///< raw_rows only
  std::size_t cols = 0;  ///< raw_rows only
};

struct FromFile {
  std::string path;
  FileLayout layout;
};

struct SignalSpec {
  std::variant<SmoothPeriodic, Piecewise, Noisy, Harmonic2D, FromFile> kind;
};

Grid1D generate(const SignalSpec& spec, std::size_t m, Domain domain = {});
Grid2D generate_2d(const SignalSpec& spec, std::size_t m1, std::size_t m2, Domain domain1 = {}, Domain domain2 = {});

/// Closed-form q-th derivative (with respect to x) at the grid points, for
/// smooth and piecewise specs. Piecewise derivatives take the right-hand limit
/// at a jump.
std::vector<double> exact_derivative(const SignalSpec& spec, std::size_t m, int q, Domain domain = {});

/// Jumps declared by the spec, empty for specs without jumps.
std::vector<JumpSpec> declared_jumps(const SignalSpec& spec);

/// Standard normal samples from a seeded 64-bit Mersenne twister via Box-Muller.
std::vector<double> gaussian_noise(std::size_t count, std::uint64_t seed);

struct LoadOptions {
  std::optional<Domain> domain1;
  std::optional<Domain> domain2;
};

/// Reads a grid file. Lines starting with '#' are comments, except
/// "# domain a b [a2 b2]" which sets the domain; explicit options win.
std::variant<Grid1D, Grid2D> load_grid(const std::string& path, const FileLayout& layout,
                                       const LoadOptions& options = {});

}  // namespace specknot
