#include "specknot/jumps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "specknot/error.hpp"
#include "specknot/filters.hpp"
#include "specknot/simd/kernels.hpp"

namespace specknot {
namespace {

std::size_t wrap(long i, std::size_t m) {
  const long mm = static_cast<long>(m);
  return static_cast<std::size_t>(((i % mm) + mm) % mm);
}

std::size_t circular_distance(std::size_t i, std::size_t j, std::size_t m) {
  const std::size_t d = i > j ? i - j : j - i;
  return std::min(d, m - d);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Strict local maxima with periodic wraparound; a plateau counts once, at its
// leftmost index, when both flanks are lower.
std::vector<std::size_t> local_maxima(const std::vector<double>& a) {
  const std::size_t m = a.size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(a[i] > a[wrap(static_cast<long>(i) - 1, m)])) continue;
    std::size_t j = i;
    std::size_t run = 0;
    while (run < m && a[wrap(static_cast<long>(j) + 1, m)] == a[i]) {
      j = wrap(static_cast<long>(j) + 1, m);
      ++run;
    }
    if (a[wrap(static_cast<long>(j) + 1, m)] < a[i]) out.push_back(i);
  }
  return out;
}

double parameter(std::size_t i, std::size_t m) {
  return static_cast<double>(i) / static_cast<double>(m - 1);
}

struct C0Shape {
  bool matches = false;
  std::size_t start = 0;  // right sample of the straddling pair
};

// Two same-signed lobes of comparable size straddling the jump, flanked on
// both sides by opposite-signed lobes.
C0Shape c0_shape(const std::vector<double>& res, std::size_t i) {
  const std::size_t m = res.size();
  const std::size_t left = wrap(static_cast<long>(i) - 1, m);
  const std::size_t right = wrap(static_cast<long>(i) + 1, m);
  const double peak = std::abs(res[i]);
  const std::size_t nb = std::abs(res[left]) >= std::abs(res[right]) ? left : right;
  if (sign(res[nb]) != sign(res[i]) || std::abs(res[nb]) < 0.5 * peak) return {};

  const std::size_t p0 = nb == left ? left : i;
  const std::size_t p1 = nb == left ? i : right;
  const std::size_t o0 = wrap(static_cast<long>(p0) - 1, m);
  const std::size_t o1 = wrap(static_cast<long>(p1) + 1, m);
  for (std::size_t o : {o0, o1}) {
    if (sign(res[o]) != -sign(res[i]) || std::abs(res[o]) < 0.3 * peak) return {};
  }
  return {true, p1};
}

// Zero crossing of the C1 dipole next to lobe i, on the side with the larger
// opposite-signed partner lobe.
std::size_t dipole_center(const std::vector<double>& res, std::size_t i) {
  const std::size_t m = res.size();
  const int s = sign(res[i]);
  double best_partner = -1.0;
  double best_pos = static_cast<double>(i);
  for (int dir : {-1, 1}) {
    for (int step = 1; step <= 3; ++step) {
      const long k = static_cast<long>(i) + dir * step;
      const double vk = res[wrap(k, m)];
      if (sign(vk) == s) continue;
      const long prev = k - dir;
      const double vp = std::abs(res[wrap(prev, m)]);
      double partner = 0.0;
      for (int t = 0; t < 3; ++t) {
        const double v = res[wrap(k + dir * t, m)];
        if (sign(v) == -s) partner = std::max(partner, std::abs(v));
      }
      if (partner > best_partner) {
        best_partner = partner;
        const double frac = vp + std::abs(vk) > 0.0 ? vp / (vp + std::abs(vk)) : 0.0;
        best_pos = static_cast<double>(prev) + dir * frac;
      }
      break;
    }
  }
  return wrap(std::lround(best_pos), m);
}

}  // namespace

std::size_t JumpReport::count(JumpKind kind) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [kind](const JumpEntry& e) { return e.kind == kind; }));
}

std::vector<double> jump_indicator(std::span<const double> samples, double alpha) {
  require(samples.size() >= 4, "jump_indicator: need at least 4 samples");
  std::vector<cplx> coeffs = dft_forward(samples);
  const SpectralFilter k = jump_filter(samples.size(), alpha);
  simd::multiply(k.multipliers, coeffs, coeffs);
  return dft_inverse(coeffs);
}

std::vector<double> jump_indicator(const Grid1D& g, double alpha) { return jump_indicator(g.samples, alpha); }

std::vector<double> unit_jump_response(std::size_t m, double alpha) {
  std::vector<double> saw(m);
  for (std::size_t i = 0; i < m; ++i) saw[i] = 0.5 - static_cast<double>(i) / static_cast<double>(m);
  return jump_indicator(saw, alpha);
}

double default_threshold(std::span<const double> samples) {
  if (samples.empty()) return 1e-9;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
  return std::max(0.1 * (*hi - *lo), 1e-9 * scale);
}

JumpReport classify_jumps(std::span<const double> indicator, const JumpOptions& options) {
  require(options.threshold > 0.0, "classify_jumps: threshold must be positive");
  require(options.window >= 1, "classify_jumps: window must be at least 1");
  const std::size_t m = indicator.size();
  require(m >= 4, "classify_jumps: need at least 4 samples");
  const double l = options.threshold;
  const std::size_t w = options.window;
  const double md = static_cast<double>(m);
  const std::vector<double> J(indicator.begin(), indicator.end());
  const std::vector<double> unit = unit_jump_response(m, options.alpha);

  // Pass 1: greedy C0 fitting and subtraction.
  std::vector<double> res = J;
  std::vector<std::size_t> starts;
  Eigen::VectorXd sizes;
  const std::size_t max_c0 = std::max<std::size_t>(1, m / 8);
  auto scaled = [&] {
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = md * std::abs(res[i]);
    return b;
  };
  while (starts.size() < max_c0) {
    const std::vector<double> b = scaled();
    std::vector<std::size_t> cands;
    for (std::size_t i : local_maxima(b)) {
      if (b[i] > l) cands.push_back(i);
    }
    std::stable_sort(cands.begin(), cands.end(), [&](std::size_t x, std::size_t y) { return b[x] > b[y]; });
    bool picked = false;
    for (std::size_t i : cands) {
      const C0Shape shape = c0_shape(res, i);
      if (!shape.matches) continue;
      if (std::find(starts.begin(), starts.end(), shape.start) != starts.end()) continue;
      starts.push_back(shape.start);
      picked = true;
      break;
    }
    if (!picked) break;

    std::vector<std::size_t> rows;
    for (std::size_t s : starts) {
      rows.push_back(wrap(static_cast<long>(s) - 1, m));
      rows.push_back(s);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Eigen::MatrixXd A(rows.size(), starts.size());
    Eigen::VectorXd y(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      y(r) = J[rows[r]];
      for (std::size_t c = 0; c < starts.size(); ++c) A(r, c) = unit[wrap(static_cast<long>(rows[r]) - static_cast<long>(starts[c]), m)];
    }
    sizes = A.completeOrthogonalDecomposition().solve(y);
    for (std::size_t i = 0; i < m; ++i) {
      double fit = 0.0;
      for (std::size_t c = 0; c < starts.size(); ++c) {
        fit += sizes(static_cast<long>(c)) * unit[wrap(static_cast<long>(i) - static_cast<long>(starts[c]), m)];
      }
      res[i] = J[i] - fit;
    }
  }

  std::vector<JumpEntry> c0;
  for (std::size_t s : starts) {
    const double peak = std::max(std::abs(J[wrap(static_cast<long>(s) - 1, m)]), std::abs(J[s]));
    if (!(peak > l)) continue;
    const double u = s == 0 ? 0.0 : (static_cast<double>(s) - 0.5) / (md - 1.0);
    c0.push_back({s, u, JumpKind::C0, peak});
  }
  // Keep the stronger of two reported C0 jumps closer than the window.
  std::stable_sort(c0.begin(), c0.end(), [](const JumpEntry& a, const JumpEntry& b) { return a.magnitude > b.magnitude; });
  std::vector<JumpEntry> entries;
  for (const JumpEntry& e : c0) {
    const bool clear = std::all_of(entries.begin(), entries.end(), [&](const JumpEntry& o) {
      return circular_distance(e.index, o.index, m) > w;
    });
    if (clear) entries.push_back(e);
  }

  // Pass 2: C1 kinks in the residual, scaled by m.
  const std::vector<double> b = scaled();
  std::vector<std::size_t> cands;
  for (std::size_t i : local_maxima(b)) {
    if (b[i] > l) cands.push_back(i);
  }
  std::stable_sort(cands.begin(), cands.end(), [&](std::size_t x, std::size_t y) { return b[x] > b[y]; });
  std::vector<JumpEntry> c1;
  auto near_c0 = [&](std::size_t i) {
    return std::any_of(starts.begin(), starts.end(), [&](std::size_t s) { return circular_distance(i, s, m) <= w; });
  };
  for (std::size_t i : cands) {
    if (near_c0(i)) continue;
    if (c0_shape(res, i).matches) continue;
    const std::size_t center = dipole_center(res, i);
    if (near_c0(center)) continue;
    const bool clear = std::all_of(c1.begin(), c1.end(), [&](const JumpEntry& o) {
      return circular_distance(center, o.index, m) > w;
    });
    if (!clear) continue;
    c1.push_back({center, parameter(center, m), JumpKind::C1, b[i]});
  }
  entries.insert(entries.end(), c1.begin(), c1.end());
  std::sort(entries.begin(), entries.end(), [](const JumpEntry& a, const JumpEntry& b) {
    return a.u < b.u || (a.u == b.u && a.index < b.index);
  });
  return JumpReport{std::move(entries)};
}

Grid2D jump_indicator_2d(const Grid2D& g, Axis axis, double alpha) {
  g.validate();
  require(g.extent(axis) >= 4, "jump_indicator_2d: need at least 4 samples along the filtered axis");
  Spectrum2D s = fft_forward_2d(g);
  apply_filter_strands_inplace(s, jump_filter(g.extent(axis), alpha), axis);
  Grid2D out = g;
  out.samples = fft_inverse_2d(s);
  return out;
}

JumpReport classify_jumps_2d(const Grid2D& indicator, Axis axis, const JumpOptions& options, double min_fraction) {
  indicator.validate();
  const std::size_t m = indicator.extent(axis);
  const std::size_t strands = axis == Axis::First ? indicator.m2 : indicator.m1;
  require(m >= 4, "classify_jumps_2d: need at least 4 samples along the axis");

  struct Tally {
    std::vector<std::size_t> votes;
    std::vector<double> magnitude;
  };
  std::map<JumpKind, Tally> tallies;
  for (JumpKind kind : {JumpKind::C0, JumpKind::C1}) tallies[kind] = {std::vector<std::size_t>(m, 0), std::vector<double>(m, 0.0)};

  std::vector<double> strand(m);
  for (std::size_t t = 0; t < strands; ++t) {
    for (std::size_t i = 0; i < m; ++i) strand[i] = axis == Axis::First ? indicator.at(i, t) : indicator.at(t, i);
    for (const JumpEntry& e : classify_jumps(strand, options).entries) {
      Tally& tally = tallies[e.kind];
      ++tally.votes[e.index];
      tally.magnitude[e.index] += e.magnitude;
    }
  }

  const double needed = min_fraction * static_cast<double>(strands);
  const double md = static_cast<double>(m);
  std::vector<JumpEntry> entries;
  for (JumpKind kind : {JumpKind::C0, JumpKind::C1}) {
    const Tally& tally = tallies[kind];
    // Votes pooled over +-1 sample absorb per-strand localization jitter.
    std::vector<double> pooled(m);
    for (std::size_t i = 0; i < m; ++i) {
      pooled[i] = static_cast<double>(tally.votes[wrap(static_cast<long>(i) - 1, m)] + tally.votes[i] +
                                      tally.votes[wrap(static_cast<long>(i) + 1, m)]);
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i : local_maxima(pooled)) {
      if (pooled[i] >= needed && pooled[i] > 0.0) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t x, std::size_t y) { return pooled[x] > pooled[y]; });
    for (std::size_t i : peaks) {
      // Most-voted index in the pooling window.
      std::size_t best = i;
      for (long d : {-1L, 1L}) {
        const std::size_t j = wrap(static_cast<long>(i) + d, m);
        if (tally.votes[j] > tally.votes[best]) best = j;
      }
      const bool clear = std::all_of(entries.begin(), entries.end(), [&](const JumpEntry& o) {
        return circular_distance(best, o.index, m) > options.window;
      });
      if (!clear) continue;
      double mag = 0.0;
      double n = 0.0;
      for (long d : {-1L, 0L, 1L}) {
        const std::size_t j = wrap(static_cast<long>(i) + d, m);
        mag += tally.magnitude[j];
        n += static_cast<double>(tally.votes[j]);
      }
      double u = static_cast<double>(best) / (md - 1.0);
      if (kind == JumpKind::C0) u = best == 0 ? 0.0 : (static_cast<double>(best) - 0.5) / (md - 1.0);
      entries.push_back({best, u, kind, mag / n});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const JumpEntry& a, const JumpEntry& b) {
    return a.u < b.u || (a.u == b.u && a.index < b.index);
  });
  return JumpReport{std::move(entries)};
}

}  // namespace specknot
