#pragma once
// B-spline basis evaluation, least-squares fitting and evaluation in 1D and
// tensor-product 2D.

#include <cstddef>
#include <span>
#include <vector>

#include "specknot/knots.hpp"
#include "specknot/spectral.hpp"

namespace specknot {

/// Nonzero basis functions at one parameter: N_{first + r, p}(u) = values[r].
struct BasisValues {
  std::size_t first = 0;
  std::vector<double> values;
};

/// Index j of the span [k_j, k_{j+1}) containing u; u = 1 maps to the last
/// nonempty span.
std::size_t find_span(const KnotVector& knots, double u);

/// Cox-de Boor evaluation of the p + 1 basis functions that may be nonzero at u.
BasisValues basis_eval(const KnotVector& knots, double u);

/// Banded m x n collocation matrix; row i holds q values starting at first_col[i].
struct CollocationMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t order = 0;
  std::vector<std::size_t> first_col;
  std::vector<double> values;  // rows * order

  double value(std::size_t row, std::size_t col) const noexcept;
  std::vector<double> dense() const;  // row-major rows x cols
};

CollocationMatrix build_collocation(const KnotVector& knots, std::span<const double> params);

/// u_i = i / (m - 1); a single sample maps to 0.
std::vector<double> fit_parameters(std::size_t m);

/// Result of a banded least-squares solve with several right-hand sides.
struct LeastSquaresSolution {
  std::vector<double> x;  // cols x rhs_count, row-major
  std::size_t rank = 0;
};

/// Minimizes ||A x - b|| for each column of b (rows x rhs_count, row-major).
/// Full-rank systems use Givens QR on the band; when the triangular factor
/// has a diagonal below 1e-8 of its largest or an estimated condition number
/// above 1e8, the minimum-norm solution is taken
/// from a complete orthogonal decomposition of that factor with singular values
/// below 1e-12 of the largest treated as zero.
LeastSquaresSolution solve_least_squares(const CollocationMatrix& A, std::span<const double> b, std::size_t rhs_count);

class BSplineModel {
 public:
  BSplineModel(KnotVector knots, std::vector<double> control_points);

  const KnotVector& knots() const noexcept { return knots_; }
  const std::vector<double>& control_points() const noexcept { return control_points_; }
  int degree() const noexcept { return knots_.degree(); }

  double evaluate(double u) const;
  std::vector<double> evaluate(std::span<const double> u) const;

 private:
  KnotVector knots_;
  std::vector<double> control_points_;
};

class TensorSplineModel {
 public:
  /// control_net is n1 x n2 row-major.
  TensorSplineModel(KnotVector knots1, KnotVector knots2, std::vector<double> control_net);

  const KnotVector& knots1() const noexcept { return knots1_; }
  const KnotVector& knots2() const noexcept { return knots2_; }
  const std::vector<double>& control_net() const noexcept { return net_; }
  std::size_t n1() const noexcept { return knots1_.control_count(); }
  std::size_t n2() const noexcept { return knots2_.control_count(); }

  double evaluate(double u1, double u2) const;

 private:
  KnotVector knots1_;
  KnotVector knots2_;
  std::vector<double> net_;
};

struct FitReport {
  double rms_error = 0.0;
  double max_error = 0.0;
  std::vector<double> residuals;  // model - data, per sample
  std::size_t knot_count = 0;
  std::size_t solve_rank = 0;
};

/// e_RMS and e_max of a residual vector.
FitReport report_from_residuals(std::vector<double> residuals);

struct Fit1D {
  BSplineModel model;
  FitReport report;
};

struct Fit2D {
  TensorSplineModel model;
  FitReport report;
};

Fit1D fit_least_squares(const Grid1D& g, const KnotVector& knots);
FitReport compute_errors(const BSplineModel& model, const Grid1D& g);

/// Separable fit: dimension 1 for every column, then dimension 2 on the
/// intermediate coefficients.
Fit2D fit_tensor(const Grid2D& g, const KnotVector& knots1, const KnotVector& knots2);
FitReport compute_errors(const TensorSplineModel& model, const Grid2D& g);

}  // namespace specknot
