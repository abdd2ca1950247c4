#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "specknot/bspline.hpp"
#include "specknot/datagen.hpp"
#include "specknot/error.hpp"
#include "specknot/pipeline.hpp"

using namespace specknot;

namespace {

KnotVector random_knots(std::size_t n, int q, std::mt19937_64& rng, bool allow_repeats = true) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> interior(n - static_cast<std::size_t>(q));
  for (auto& x : interior) x = d(rng);
  if (allow_repeats && interior.size() >= 3 && d(rng) < 0.5) {
    const auto rep = std::min<std::size_t>(static_cast<std::size_t>(q), interior.size());
    for (std::size_t r = 1; r < rep; ++r) interior[r] = interior[0];
  }
  std::sort(interior.begin(), interior.end());
  std::vector<double> k(static_cast<std::size_t>(q), 0.0);
  k.insert(k.end(), interior.begin(), interior.end());
  k.insert(k.end(), static_cast<std::size_t>(q), 1.0);
  return KnotVector(std::move(k), q);
}

std::vector<double> spline_samples(const BSplineModel& s, std::size_t m) {
  return s.evaluate(fit_parameters(m));
}

}  // namespace

TEST(Basis, PartitionOfUnityAtRandomParameters) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<KnotVector> vectors;
  for (int q = 1; q <= 6; ++q) {
    for (int t = 0; t < 5; ++t) vectors.push_back(random_knots(static_cast<std::size_t>(q) + 3 + 5 * t, q, rng));
  }
  std::size_t evaluations = 0;
  const std::size_t per_vector = 1000000 / vectors.size() + 1;
  for (const auto& k : vectors) {
    for (std::size_t i = 0; i < per_vector; ++i) {
      const double u = i == 0 ? 0.0 : (i == 1 ? 1.0 : d(rng));
      const auto b = basis_eval(k, u);
      ASSERT_LE(b.values.size(), static_cast<std::size_t>(k.order()));
      double sum = 0.0;
      for (double v : b.values) {
        ASSERT_GE(v, 0.0);
        sum += v;
      }
      ASSERT_NEAR(sum, 1.0, 1e-12) << "u=" << u;
      ++evaluations;
    }
  }
  EXPECT_GE(evaluations, 1000000u);
}

TEST(Basis, MatchesRecursiveDefinition) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int q = 1; q <= 5; ++q) {
    for (int t = 0; t < 6; ++t) {
      const auto k = random_knots(static_cast<std::size_t>(q) + 2 + 3 * t, q, rng);
      for (int s = 0; s < 200; ++s) {
        const double u = s == 0 ? 0.0 : (s == 1 ? 1.0 : d(rng));
        const auto b = basis_eval(k, u);
        for (std::size_t j = 0; j < k.control_count(); ++j) {
          double mine = 0.0;
          if (j >= b.first && j < b.first + b.values.size()) mine = b.values[j - b.first];
          ASSERT_NEAR(mine, oracle::cox_de_boor(k.knots(), j, q - 1, u), 1e-13) << "q=" << q << " j=" << j << " u=" << u;
        }
      }
    }
  }
}

TEST(Basis, DegreeZeroUniform) {
  const auto k = uniform_knots(6, 1);
  for (double u : {0.0, 0.1, 1.0 / 6, 0.5, 0.99, 1.0}) {
    const auto b = basis_eval(k, u);
    ASSERT_EQ(b.values.size(), 1u);
    EXPECT_EQ(b.values[0], 1.0);
  }
}

TEST(Basis, ClampedEndpoints) {
  const auto k = uniform_knots(7, 4);
  const auto b0 = basis_eval(k, 0.0);
  EXPECT_EQ(b0.first, 0u);
  EXPECT_EQ(b0.values[0], 1.0);
  for (std::size_t r = 1; r < b0.values.size(); ++r) EXPECT_EQ(b0.values[r], 0.0);
  const auto b1 = basis_eval(k, 1.0);
  EXPECT_EQ(b1.first + b1.values.size(), 7u);
  EXPECT_EQ(b1.values.back(), 1.0);
  for (std::size_t r = 0; r + 1 < b1.values.size(); ++r) EXPECT_EQ(b1.values[r], 0.0);
  EXPECT_THROW(basis_eval(k, -1e-9), Error);
  EXPECT_THROW(basis_eval(k, 1.0 + 1e-9), Error);
}

TEST(Basis, LocalSupport) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  const auto k = random_knots(12, 4, rng);
  for (int s = 0; s < 2000; ++s) {
    const double u = d(rng);
    const auto b = basis_eval(k, u);
    for (std::size_t r = 0; r < b.values.size(); ++r) {
      const std::size_t j = b.first + r;
      if (u < k[j] || u > k[j + 4]) {
        EXPECT_EQ(b.values[r], 0.0);
      }
    }
  }
}

TEST(FindSpan, HalfOpenWithClosedEnd) {
  const KnotVector k({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 3);
  EXPECT_EQ(find_span(k, 0.0), 2u);
  EXPECT_EQ(find_span(k, 0.49), 2u);
  EXPECT_EQ(find_span(k, 0.5), 4u);
  EXPECT_EQ(find_span(k, 1.0), 4u);
}

TEST(Collocation, Examples) {
  const auto k = uniform_knots(6, 3);
  const auto A1 = build_collocation(k, std::vector<double>{0.0});
  const auto d1 = A1.dense();
  EXPECT_EQ(d1, (std::vector<double>{1, 0, 0, 0, 0, 0}));
  const auto params = fit_parameters(37);
  const auto A = build_collocation(k, params);
  EXPECT_EQ(A.rows, 37u);
  EXPECT_EQ(A.cols, 6u);
  const auto D = A.dense();
  for (std::size_t i = 0; i < 37; ++i) {
    double sum = 0.0;
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < 6; ++j) {
      sum += D[i * 6 + j];
      nnz += D[i * 6 + j] != 0.0;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_LE(nnz, 3u);
  }
  EXPECT_EQ(fit_parameters(1), (std::vector<double>{0.0}));
}

TEST(Fit, RecoversExactSpline) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int q = 2; q <= 5; ++q) {
    const auto k = uniform_knots(15, q);
    std::vector<double> cps(15);
    for (auto& c : cps) c = d(rng);
    const BSplineModel truth(k, cps);
    const Grid1D g{spline_samples(truth, 200), {}};
    const auto fit = fit_least_squares(g, k);
    for (std::size_t j = 0; j < 15; ++j) EXPECT_NEAR(fit.model.control_points()[j], cps[j], 1e-9);
    EXPECT_LT(fit.report.max_error, 1e-9);
    EXPECT_EQ(fit.report.solve_rank, 15u);
    EXPECT_EQ(fit.report.knot_count, 15u + static_cast<std::size_t>(q));
  }
}

TEST(Fit, ConstantData) {
  const Grid1D g{std::vector<double>(50, -1.25), {}};
  const auto fit = fit_least_squares(g, uniform_knots(9, 4));
  for (double c : fit.model.control_points()) EXPECT_NEAR(c, -1.25, 1e-12);
  EXPECT_LT(fit.report.rms_error, 1e-12);
  EXPECT_LT(fit.report.max_error, 1e-12);
}

TEST(Fit, MatchesDenseQrOnFullRankSystems) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (int t = 0; t < 10; ++t) {
    const auto k = random_knots(12, 4, rng, false);
    const Grid1D g{gaussian_noise(300, static_cast<std::uint64_t>(t)), {}};
    const auto A = build_collocation(k, fit_parameters(300));
    const auto D = A.dense();
    Eigen::MatrixXd M = Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(D.data(), 300, 12);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(g.samples.data(), 300);
    const Eigen::VectorXd x = M.colPivHouseholderQr().solve(y);
    const auto fit = fit_least_squares(g, k);
    if (fit.report.solve_rank < 12) continue;  // random knots may leave a span empty
    for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(fit.model.control_points()[j], x(static_cast<long>(j)), 1e-10);
  }
}

// Knots with no parameters in between make the system rank deficient.
TEST(Fit, RankDeficientMatchesPseudoinverse) {
  // Basis 4 lives on [0.41, 0.414], where no parameter falls.
  const KnotVector k({0, 0, 0, 0, 0.41, 0.411, 0.412, 0.413, 0.414, 1, 1, 1, 1}, 4);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> d;
  for (std::size_t m : {10u, 21u, 31u}) {
    std::vector<double> y(m);
    for (auto& v : y) v = d(rng);
    const Grid1D g{y, {}};
    const auto fit = fit_least_squares(g, k);
    EXPECT_LT(fit.report.solve_rank, k.control_count()) << m;
    const auto A = build_collocation(k, fit_parameters(m));
    const auto x = oracle::pinv_solve(A.dense(), m, A.cols, y);
    for (std::size_t j = 0; j < x.size(); ++j) {
      EXPECT_TRUE(std::isfinite(fit.model.control_points()[j]));
      EXPECT_NEAR(fit.model.control_points()[j], x[j], 1e-8) << "m=" << m << " j=" << j;
    }
  }
}

// Derivative-informed knots on a noisy narrow peak crowd some spans below
// the sample spacing. The banded factor then has unremarkable diagonals but is
// numerically singular; the fit must still agree with the minimum-norm one.
TEST(Fit, CrowdedKnotsMatchMinimumNorm) {
  const std::size_t m = 1000;
  const SignalSpec peak{SmoothPeriodic{Formula::Peak, 10.0, 0.02, 0.5}};
  const Grid1D g = generate(SignalSpec{Noisy{std::make_shared<const SignalSpec>(peak), 0.1, 7}}, m);
  PlacementOptions o;
  o.method = Method::DiFS;
  const KnotVector k = place_knots(g, 536, o).knots;
  const auto fit = fit_least_squares(g, k);
  EXPECT_LT(fit.report.solve_rank, k.control_count());

  const auto A = build_collocation(k, fit_parameters(m));
  const auto x = oracle::pinv_solve(A.dense(), m, A.cols, g.samples);
  double ref = 0.0, xmax = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double v = -g.samples[i];
    for (std::size_t c = 0; c < A.cols; ++c) v += A.value(i, c) * x[c];
    ref += v * v;
  }
  ref = std::sqrt(ref / static_cast<double>(m));
  for (std::size_t j = 0; j < x.size(); ++j) {
    xmax = std::max(xmax, std::abs(x[j]));
    fmax = std::max(fmax, std::abs(fit.model.control_points()[j]));
  }
  EXPECT_NEAR(fit.report.rms_error, ref, 1e-6 * ref);
  EXPECT_LE(fmax, 2.0 * xmax);
}

TEST(Fit, IsAProjection) {
  std::mt19937_64 rng(7);
  const auto k = random_knots(20, 4, rng, false);
  const Grid1D g{gaussian_noise(400, 3), {}};
  const auto first = fit_least_squares(g, k);
  const Grid1D again{spline_samples(first.model, 400), {}};
  const auto second = fit_least_squares(again, k);
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_NEAR(second.model.control_points()[j], first.model.control_points()[j], 1e-10);
  }
}

TEST(Fit, MultiplicityQKnotDecouplesSides) {
  const int q = 4;
  const KnotVector k({0, 0, 0, 0, 0.2, 0.35, 0.5, 0.5, 0.5, 0.5, 0.7, 0.85, 1, 1, 1, 1}, q);
  const std::size_t m = 201;
  const auto params = fit_parameters(m);
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = std::sin(7.0 * params[i]);
  const auto base = fit_least_squares(Grid1D{y, {}}, k);
  auto perturbed = y;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d;
  for (std::size_t i = 0; i < m; ++i) {
    if (params[i] < 0.5) perturbed[i] += d(rng);
  }
  const auto moved = fit_least_squares(Grid1D{perturbed, {}}, k);
  // Basis functions 6..11 live on [0.5, 1].
  for (std::size_t j = 6; j < 12; ++j) {
    EXPECT_LT(std::abs(moved.model.control_points()[j] - base.model.control_points()[j]), 1e-10) << j;
  }
}

TEST(Evaluate, Properties) {
  const auto k = uniform_knots(8, 4);
  const BSplineModel flat(k, std::vector<double>(8, 2.0));
  for (double u : {0.0, 0.3, 0.77, 1.0}) EXPECT_NEAR(flat.evaluate(u), 2.0, 1e-14);
  const std::vector<double> cps{1, -2, 5, 0.5, 3, -1, 4, 7};
  const BSplineModel s(k, cps);
  EXPECT_DOUBLE_EQ(s.evaluate(0.0), 1.0);
  EXPECT_DOUBLE_EQ(s.evaluate(1.0), 7.0);
  for (int i = 0; i <= 1000; ++i) {
    const double v = s.evaluate(i / 1000.0);
    EXPECT_GE(v, -2.0);
    EXPECT_LE(v, 7.0);
  }
  EXPECT_THROW(s.evaluate(1.5), Error);
  EXPECT_THROW(BSplineModel(k, std::vector<double>(7)), Error);
}

TEST(Tensor, SeparableSplineRecovered) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const auto k1 = uniform_knots(8, 4), k2 = random_knots(6, 3, rng, false);
  std::vector<double> a(8), b(6);
  for (auto& x : a) x = d(rng);
  for (auto& x : b) x = d(rng);
  const BSplineModel sa(k1, a), sb(k2, b);
  const std::size_t m1 = 40, m2 = 30;
  const auto ga = spline_samples(sa, m1), gb = spline_samples(sb, m2);
  Grid2D g{m1, m2, std::vector<double>(m1 * m2), {}, {}};
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j < m2; ++j) g.at(i, j) = ga[i] * gb[j];
  }
  const auto fit = fit_tensor(g, k1, k2);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(fit.model.control_net()[i * 6 + j], a[i] * b[j], 1e-8);
  }
  EXPECT_LT(fit.report.max_error, 1e-8);
  EXPECT_EQ(fit.report.solve_rank, 48u);
}

TEST(Tensor, ConstantField) {
  Grid2D g{20, 15, std::vector<double>(300, 4.0), {}, {}};
  const auto fit = fit_tensor(g, uniform_knots(6, 4), uniform_knots(5, 3));
  for (double c : fit.model.control_net()) EXPECT_NEAR(c, 4.0, 1e-12);
  EXPECT_LT(fit.report.max_error, 1e-12);
  EXPECT_NEAR(fit.model.evaluate(0.3, 0.9), 4.0, 1e-12);
}

TEST(Tensor, MatchesKroneckerOracle) {
  const std::size_t m1 = 32, m2 = 24, n1 = 9, n2 = 7;
  const auto k1 = uniform_knots(n1, 4), k2 = uniform_knots(n2, 4);
  Grid2D g{m1, m2, gaussian_noise(m1 * m2, 77), {}, {}};
  const auto fit = fit_tensor(g, k1, k2);
  const auto A1 = build_collocation(k1, fit_parameters(m1)).dense();
  const auto A2 = build_collocation(k2, fit_parameters(m2)).dense();
  const auto P = oracle::kronecker_solve(A1, m1, n1, A2, m2, n2, g.samples);
  for (std::size_t j = 0; j < n1 * n2; ++j) EXPECT_NEAR(fit.model.control_net()[j], P[j], 1e-8);
  for (std::size_t i1 = 0; i1 < m1; ++i1) {
    for (std::size_t i2 = 0; i2 < m2; ++i2) {
      double model = 0.0;
      for (std::size_t j1 = 0; j1 < n1; ++j1) {
        for (std::size_t j2 = 0; j2 < n2; ++j2) model += A1[i1 * n1 + j1] * A2[i2 * n2 + j2] * P[j1 * n2 + j2];
      }
      EXPECT_NEAR(fit.report.residuals[i1 * m2 + i2], model - g.at(i1, i2), 1e-8);
    }
  }
}

TEST(Errors, Examples) {
  const auto r = report_from_residuals({3.0, 4.0});
  EXPECT_NEAR(r.rms_error, std::sqrt(12.5), 1e-15);
  EXPECT_NEAR(r.rms_error, 3.5355, 1e-4);
  EXPECT_EQ(r.max_error, 4.0);

  const auto k = uniform_knots(5, 3);
  const BSplineModel s(k, std::vector<double>(5, 1.0));
  const Grid1D exact{std::vector<double>(30, 1.0), {}};
  const auto perfect = compute_errors(s, exact);
  EXPECT_LE(perfect.rms_error, 1e-15);
  EXPECT_LE(perfect.max_error, 1e-15);
  const Grid1D shifted{std::vector<double>(30, 1.25), {}};
  const auto off = compute_errors(s, shifted);
  EXPECT_NEAR(off.rms_error, 0.25, 1e-15);
  EXPECT_NEAR(off.max_error, 0.25, 1e-15);
  EXPECT_LE(off.rms_error, off.max_error);
  EXPECT_EQ(off.residuals.size(), 30u);
}
