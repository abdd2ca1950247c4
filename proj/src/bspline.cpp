#include "specknot/bspline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "specknot/error.hpp"

namespace specknot {
namespace {

void require_parameter(double u) {
  require(u >= 0.0 && u <= 1.0, "parameter " + std::to_string(u) + " is outside [0, 1]");
}

struct GivensResult {
  double c;
  double s;
  double r;
};

GivensResult givens(double a, double b) {
  const double r = std::hypot(a, b);
  return {a / r, b / r, r};
}

// Banded upper-triangular factor: band[j * q + k] = R(j, j + k).
struct BandedR {
  std::size_t n;
  std::size_t q;
  std::size_t nrhs;
  std::vector<double> band;
  std::vector<double> z;  // n x nrhs

  double& at(std::size_t j, std::size_t k) { return band[j * q + k]; }
};

BandedR factor(const CollocationMatrix& A, std::span<const double> b, std::size_t nrhs) {
  const std::size_t n = A.cols;
  const std::size_t q = A.order;
  BandedR R{n, q, nrhs, std::vector<double>(n * q, 0.0), std::vector<double>(n * nrhs, 0.0)};
  std::vector<double> row(q);
  std::vector<double> rhs(nrhs);
  for (std::size_t i = 0; i < A.rows; ++i) {
    std::copy_n(A.values.begin() + static_cast<long>(i * q), q, row.begin());
    std::copy_n(b.begin() + static_cast<long>(i * nrhs), nrhs, rhs.begin());
    // row[k] is the entry in column j + k while eliminating column j.
    for (std::size_t j = A.first_col[i]; j < n; ++j) {
      if (row[0] != 0.0) {
        double& d = R.at(j, 0);
        if (d == 0.0) {
          for (std::size_t k = 0; k < q; ++k) R.at(j, k) = row[k];
          std::copy(rhs.begin(), rhs.end(), R.z.begin() + static_cast<long>(j * nrhs));
          break;
        }
        const GivensResult g = givens(d, row[0]);
        d = g.r;
        for (std::size_t k = 1; k < q; ++k) {
          const double t = R.at(j, k);
          R.at(j, k) = g.c * t + g.s * row[k];
          row[k] = -g.s * t + g.c * row[k];
        }
        double* zj = R.z.data() + j * nrhs;
        for (std::size_t c = 0; c < nrhs; ++c) {
          const double t = zj[c];
          zj[c] = g.c * t + g.s * rhs[c];
          rhs[c] = -g.s * t + g.c * rhs[c];
        }
      }
      // Shift the working row one column to the right.
      for (std::size_t k = 0; k + 1 < q; ++k) row[k] = row[k + 1];
      row[q - 1] = 0.0;
      if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) break;
    }
  }
  return R;
}

std::vector<double> back_substitute(BandedR& R) {
  const std::size_t n = R.n;
  const std::size_t q = R.q;
  const std::size_t nrhs = R.nrhs;
  std::vector<double> x(n * nrhs, 0.0);
  for (std::size_t jj = n; jj-- > 0;) {
    for (std::size_t c = 0; c < nrhs; ++c) {
      double acc = R.z[jj * nrhs + c];
      for (std::size_t k = 1; k < q && jj + k < n; ++k) acc -= R.at(jj, k) * x[(jj + k) * nrhs + c];
      x[jj * nrhs + c] = acc / R.at(jj, 0);
    }
  }
  return x;
}

// y = R x and y = R^T x for a single vector.
std::vector<double> upper_apply(BandedR& R, const std::vector<double>& x) {
  std::vector<double> y(R.n, 0.0);
  for (std::size_t j = 0; j < R.n; ++j) {
    for (std::size_t k = 0; k < R.q && j + k < R.n; ++k) y[j] += R.at(j, k) * x[j + k];
  }
  return y;
}

std::vector<double> upper_transpose_apply(BandedR& R, const std::vector<double>& x) {
  std::vector<double> y(R.n, 0.0);
  for (std::size_t j = 0; j < R.n; ++j) {
    for (std::size_t k = 0; k < R.q && j + k < R.n; ++k) y[j + k] += R.at(j, k) * x[j];
  }
  return y;
}

std::vector<double> upper_solve(BandedR& R, std::vector<double> x) {
  for (std::size_t jj = R.n; jj-- > 0;) {
    for (std::size_t k = 1; k < R.q && jj + k < R.n; ++k) x[jj] -= R.at(jj, k) * x[jj + k];
    x[jj] /= R.at(jj, 0);
  }
  return x;
}

std::vector<double> upper_transpose_solve(BandedR& R, std::vector<double> x) {
  for (std::size_t j = 0; j < R.n; ++j) {
    x[j] /= R.at(j, 0);
    for (std::size_t k = 1; k < R.q && j + k < R.n; ++k) x[j + k] -= R.at(j, k) * x[j];
  }
  return x;
}

double normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  if (s > 0.0 && std::isfinite(s)) {
    for (double& x : v) x /= s;
  }
  return s;
}

// Power-iteration estimate of the 2-norm condition number of R. The diagonal
// alone misses the ill conditioning of factors whose spans hold no data.
double condition_estimate(BandedR& R) {
  constexpr int kIterations = 12;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> start(R.n);
  for (std::size_t j = 0; j < R.n; ++j) start[j] = (j % 2 ? -1.0 : 1.0) * dist(rng);
  normalize(start);

  std::vector<double> v = start;
  double big = 0.0;
  for (int it = 0; it < kIterations; ++it) {
    v = upper_transpose_apply(R, upper_apply(R, v));
    big = normalize(v);
  }
  v = start;
  double inv = 0.0;
  for (int it = 0; it < kIterations; ++it) {
    v = upper_solve(R, upper_transpose_solve(R, std::move(v)));
    inv = normalize(v);
    if (!std::isfinite(inv)) return std::numeric_limits<double>::infinity();
  }
  return std::sqrt(big) * std::sqrt(inv);
}

LeastSquaresSolution minimum_norm(BandedR& R) {
  const std::size_t n = R.n;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < R.q && j + k < n; ++k) dense(static_cast<long>(j), static_cast<long>(j + k)) = R.at(j, k);
  }
  Eigen::MatrixXd rhs(static_cast<long>(n), static_cast<long>(R.nrhs));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < R.nrhs; ++c) rhs(static_cast<long>(j), static_cast<long>(c)) = R.z[j * R.nrhs + c];
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-12);
  cod.compute(dense);
  const Eigen::MatrixXd sol = cod.solve(rhs);
  LeastSquaresSolution out;
  out.rank = static_cast<std::size_t>(cod.rank());
  out.x.resize(n * R.nrhs);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < R.nrhs; ++c) out.x[j * R.nrhs + c] = sol(static_cast<long>(j), static_cast<long>(c));
  }
  return out;
}

// values = A x for a banded A and x of shape cols x nrhs.
std::vector<double> banded_apply(const CollocationMatrix& A, std::span<const double> x, std::size_t nrhs) {
  std::vector<double> out(A.rows * nrhs, 0.0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = 0; k < A.order; ++k) {
      const double a = A.values[i * A.order + k];
      if (a == 0.0) continue;
      const std::size_t col = A.first_col[i] + k;
      for (std::size_t c = 0; c < nrhs; ++c) out[i * nrhs + c] += a * x[col * nrhs + c];
    }
  }
  return out;
}

std::vector<double> transpose(std::span<const double> a, std::size_t rows, std::size_t cols) {
  std::vector<double> t(a.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = a[i * cols + j];
  }
  return t;
}

}  // namespace

std::size_t find_span(const KnotVector& knots, double u) {
  require_parameter(u);
  const auto& t = knots.knots();
  const std::size_t n = knots.control_count();
  const std::size_t p = static_cast<std::size_t>(knots.degree());
  if (u >= t[n]) {
    std::size_t j = n - 1;
    while (j > p && !(t[j] < t[j + 1])) --j;
    return j;
  }
  // Largest j in [p, n-1] with t[j] <= u.
  const auto it = std::upper_bound(t.begin() + static_cast<long>(p), t.begin() + static_cast<long>(n), u);
  return static_cast<std::size_t>(it - t.begin()) - 1;
}

BasisValues basis_eval(const KnotVector& knots, double u) {
  const std::size_t span = find_span(knots, u);
  const std::size_t p = static_cast<std::size_t>(knots.degree());
  const auto& t = knots.knots();
  BasisValues out;
  out.first = span - p;
  out.values.assign(p + 1, 0.0);
  out.values[0] = 1.0;
  std::vector<double> left(p + 1), right(p + 1);
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = u - t[span + 1 - j];
    right[j] = t[span + j] - u;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double temp = out.values[r] / (right[r + 1] + left[j - r]);
      out.values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out.values[j] = saved;
  }
  return out;
}

double CollocationMatrix::value(std::size_t row, std::size_t col) const noexcept {
  const std::size_t f = first_col[row];
  if (col < f || col >= f + order) return 0.0;
  return values[row * order + (col - f)];
}

std::vector<double> CollocationMatrix::dense() const {
  std::vector<double> d(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < order; ++k) d[i * cols + first_col[i] + k] = values[i * order + k];
  }
  return d;
}

CollocationMatrix build_collocation(const KnotVector& knots, std::span<const double> params) {
  CollocationMatrix A;
  A.rows = params.size();
  A.cols = knots.control_count();
  A.order = static_cast<std::size_t>(knots.order());
  A.first_col.resize(A.rows);
  A.values.resize(A.rows * A.order);
  for (std::size_t i = 0; i < A.rows; ++i) {
    if (i > 0) require(params[i] >= params[i - 1], "build_collocation: parameters must be nondecreasing");
    const BasisValues b = basis_eval(knots, params[i]);
    A.first_col[i] = b.first;
    std::copy(b.values.begin(), b.values.end(), A.values.begin() + static_cast<long>(i * A.order));
  }
  return A;
}

std::vector<double> fit_parameters(std::size_t m) {
  std::vector<double> u(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) u[i] = m > 1 ? static_cast<double>(i) / static_cast<double>(m - 1) : 0.0;
  return u;
}

LeastSquaresSolution solve_least_squares(const CollocationMatrix& A, std::span<const double> b, std::size_t rhs_count) {
  require(rhs_count >= 1, "solve_least_squares: need at least one right-hand side");
  require(b.size() == A.rows * rhs_count, "solve_least_squares: right-hand side has the wrong size");
  BandedR R = factor(A, b, rhs_count);
  double dmax = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < R.n; ++j) {
    const double d = std::abs(R.at(j, 0));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  if (dmax > 0.0 && dmin >= 1e-8 * dmax && condition_estimate(R) <= 1e8) return {back_substitute(R), R.n};
  return minimum_norm(R);
}

BSplineModel::BSplineModel(KnotVector knots, std::vector<double> control_points)
    : knots_(std::move(knots)), control_points_(std::move(control_points)) {
  require(control_points_.size() == knots_.control_count(),
          "BSplineModel: " + std::to_string(control_points_.size()) + " control points for " +
              std::to_string(knots_.control_count()) + " basis functions");
}

double BSplineModel::evaluate(double u) const {
  const BasisValues b = basis_eval(knots_, u);
  double acc = 0.0;
  for (std::size_t r = 0; r < b.values.size(); ++r) acc += b.values[r] * control_points_[b.first + r];
  return acc;
}

std::vector<double> BSplineModel::evaluate(std::span<const double> u) const {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = evaluate(u[i]);
  return out;
}

TensorSplineModel::TensorSplineModel(KnotVector knots1, KnotVector knots2, std::vector<double> control_net)
    : knots1_(std::move(knots1)), knots2_(std::move(knots2)), net_(std::move(control_net)) {
  require(net_.size() == n1() * n2(), "TensorSplineModel: control net does not match the knot vectors");
}

double TensorSplineModel::evaluate(double u1, double u2) const {
  const BasisValues b1 = basis_eval(knots1_, u1);
  const BasisValues b2 = basis_eval(knots2_, u2);
  const std::size_t cols = n2();
  double acc = 0.0;
  for (std::size_t r = 0; r < b1.values.size(); ++r) {
    double inner = 0.0;
    for (std::size_t s = 0; s < b2.values.size(); ++s) inner += b2.values[s] * net_[(b1.first + r) * cols + b2.first + s];
    acc += b1.values[r] * inner;
  }
  return acc;
}

FitReport report_from_residuals(std::vector<double> residuals) {
  FitReport r;
  double sum = 0.0;
  for (double v : residuals) {
    sum += v * v;
    r.max_error = std::max(r.max_error, std::abs(v));
  }
  r.rms_error = residuals.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(residuals.size()));
  r.residuals = std::move(residuals);
  return r;
}

Fit1D fit_least_squares(const Grid1D& g, const KnotVector& knots) {
  require(g.size() >= 1, "fit_least_squares: no samples");
  const CollocationMatrix A = build_collocation(knots, fit_parameters(g.size()));
  LeastSquaresSolution sol = solve_least_squares(A, g.samples, 1);
  std::vector<double> values = banded_apply(A, sol.x, 1);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= g.samples[i];
  FitReport report = report_from_residuals(std::move(values));
  report.knot_count = knots.size();
  report.solve_rank = sol.rank;
  return {BSplineModel(knots, std::move(sol.x)), std::move(report)};
}

FitReport compute_errors(const BSplineModel& model, const Grid1D& g) {
  const std::vector<double> u = fit_parameters(g.size());
  std::vector<double> res = model.evaluate(u);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= g.samples[i];
  FitReport report = report_from_residuals(std::move(res));
  report.knot_count = model.knots().size();
  return report;
}

Fit2D fit_tensor(const Grid2D& g, const KnotVector& knots1, const KnotVector& knots2) {
  g.validate();
  require(g.m1 >= 1 && g.m2 >= 1, "fit_tensor: empty grid");
  const CollocationMatrix A1 = build_collocation(knots1, fit_parameters(g.m1));
  const CollocationMatrix A2 = build_collocation(knots2, fit_parameters(g.m2));
  const std::size_t n1 = A1.cols;
  const std::size_t n2 = A2.cols;

  const LeastSquaresSolution s1 = solve_least_squares(A1, g.samples, g.m2);        // n1 x m2
  const std::vector<double> s1t = transpose(s1.x, n1, g.m2);                       // m2 x n1
  const LeastSquaresSolution s2 = solve_least_squares(A2, s1t, n1);                // n2 x n1
  std::vector<double> net = transpose(s2.x, n2, n1);                               // n1 x n2

  const std::vector<double> t = banded_apply(A1, net, n2);                         // m1 x n2
  const std::vector<double> tt = transpose(t, g.m1, n2);                           // n2 x m1
  const std::vector<double> vt = banded_apply(A2, tt, g.m1);                       // m2 x m1
  std::vector<double> res = transpose(vt, g.m2, g.m1);                             // m1 x m2
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= g.samples[i];
  FitReport report = report_from_residuals(std::move(res));
  report.knot_count = knots1.size() + knots2.size();
  report.solve_rank = s1.rank * s2.rank;
  return {TensorSplineModel(knots1, knots2, std::move(net)), std::move(report)};
}

FitReport compute_errors(const TensorSplineModel& model, const Grid2D& g) {
  g.validate();
  const std::vector<double> u1 = fit_parameters(g.m1);
  const std::vector<double> u2 = fit_parameters(g.m2);
  std::vector<double> res(g.samples.size());
  for (std::size_t i1 = 0; i1 < g.m1; ++i1) {
    for (std::size_t i2 = 0; i2 < g.m2; ++i2) res[i1 * g.m2 + i2] = model.evaluate(u1[i1], u2[i2]) - g.at(i1, i2);
  }
  FitReport report = report_from_residuals(std::move(res));
  report.knot_count = model.knots1().size() + model.knots2().size();
  return report;
}

}  // namespace specknot
