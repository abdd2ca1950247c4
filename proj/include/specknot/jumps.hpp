#pragma once
// Jump detection: concentration-filtered indicator and C0/C1 classification.

#include <cstddef>
#include <span>
#include <vector>

#include "specknot/spectral.hpp"

namespace specknot {

enum class JumpKind { C0, C1 };

struct JumpEntry {
  /// C0: first sample to the right of the discontinuity. C1: sample nearest the kink.
  std::size_t index = 0;
  /// Parameter location in [0, 1]. A C0 jump sits halfway between samples
  /// index-1 and index; a jump across the periodic seam reports u = 0.
  double u = 0.0;
  JumpKind kind = JumpKind::C0;
  /// Peak |J| for C0 entries, peak m|J| for C1 entries.
  double magnitude = 0.0;
};

struct JumpReport {
  std::vector<JumpEntry> entries;

  std::size_t count(JumpKind kind) const noexcept;
};

struct JumpOptions {
  double threshold = 0.0;  ///< l; must be positive
  std::size_t window = 5;  ///< w, exclusion radius in samples
  double alpha = 6.0;
};

/// J = IFFT(K_j . FFT f). Requires m >= 4.
std::vector<double> jump_indicator(const Grid1D& g, double alpha = 6.0);
std::vector<double> jump_indicator(std::span<const double> samples, double alpha = 6.0);

/// Indicator of a unit C0 jump between samples m-1 and 0.
std::vector<double> unit_jump_response(std::size_t m, double alpha = 6.0);

/// Two-pass classification of an indicator signal.
///
/// Pass 1 finds C0 jumps. Their indicator footprint is a fixed kernel (two
/// equal lobes straddling the jump, flanked by opposite-signed lobes and slowly
/// decaying ringing), so each detected jump is fitted with a scaled copy of
/// unit_jump_response and subtracted. Candidates are taken greedily from the
/// local maxima of m|residual|, so jumps too small to report are still removed
/// before pass 2; only those whose peak |J| exceeds l are reported.
///
/// Pass 2 scans m|residual| for local maxima above l that are at least w+1
/// samples from every C0 jump. A C1 kink leaves an odd dipole whose zero
/// crossing marks the kink.
JumpReport classify_jumps(std::span<const double> indicator, const JumpOptions& options);

/// 0.1 * (max f - min f), or a tiny positive value for constant input.
double default_threshold(std::span<const double> samples);

/// Applies the 1D jump filter along every strand of `axis`.
Grid2D jump_indicator_2d(const Grid2D& g, Axis axis, double alpha = 6.0);

/// Classifies each strand of a directional indicator and keeps locations
/// found in at least `min_fraction` of the strands. Locations are indices
/// along `axis`.
JumpReport classify_jumps_2d(const Grid2D& indicator, Axis axis, const JumpOptions& options,
                             double min_fraction = 0.25);

}  // namespace specknot
