#include "oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace oracle {
namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<cplx> naive_dft(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<cplx> F(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      acc += f[j] * cplx(std::cos(ang), std::sin(ang));
    }
    F[k] = acc;
  }
  return F;
}

std::vector<cplx> naive_dft_2d(std::span<const double> f, std::size_t n1, std::size_t n2) {
  std::vector<cplx> F(n1 * n2);
  for (std::size_t k1 = 0; k1 < n1; ++k1) {
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      cplx acc = 0.0;
      for (std::size_t j1 = 0; j1 < n1; ++j1) {
        for (std::size_t j2 = 0; j2 < n2; ++j2) {
          const double ang = -2.0 * kPi *
                             (static_cast<double>((k1 * j1) % n1) / static_cast<double>(n1) +
                              static_cast<double>((k2 * j2) % n2) / static_cast<double>(n2));
          acc += f[j1 * n2 + j2] * cplx(std::cos(ang), std::sin(ang));
        }
      }
      F[k1 * n2 + k2] = acc;
    }
  }
  return F;
}

double expsin_derivative(double x, int q) {
  const double w = 2.0 * kPi;
  // s^(k) for s = sin(w x)
  auto s = [&](int k) { return std::pow(w, k) * std::sin(w * x + k * kPi / 2.0); };
  std::vector<double> g(static_cast<std::size_t>(q) + 1);
  g[0] = std::exp(std::sin(w * x));
  for (int n = 1; n <= q; ++n) {
    double acc = 0.0;
    for (int k = 0; k <= n - 1; ++k) acc += binomial(n - 1, k) * s(k + 1) * g[static_cast<std::size_t>(n - 1 - k)];
    g[static_cast<std::size_t>(n)] = acc;
  }
  return g[static_cast<std::size_t>(q)];
}

double c_alpha_simpson(double alpha, std::size_t panels) {
  if (panels % 2) ++panels;
  const double h = 1.0 / static_cast<double>(panels);
  auto f = [alpha](double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::exp(1.0 / (alpha * t * (t - 1.0))); };
  double acc = f(0.0) + f(1.0);
  for (std::size_t i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) * h);
  return acc * h / 3.0;
}

double jump_indicator_at(std::span<const double> f, double x, double alpha) {
  const std::size_t n = f.size();
  const std::vector<cplx> F = naive_dft(f);
  const double c = c_alpha_simpson(alpha);
  const double md = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t k = 1; 2 * k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double eta = 2.0 * kd / md;
    if (eta >= 1.0) continue;
    const double sigma = 2.0 * kPi / c * eta * std::exp(1.0 / (alpha * eta * (eta - 1.0)));
    const double sinc = std::sin(kPi * kd / md) / (kPi * kd / md);
    const cplx K(0.0, sigma * sinc);
    const cplx term = K * F[k] * std::exp(cplx(0.0, 2.0 * kPi * kd * x));
    acc += 2.0 * term.real();
  }
  return acc / md;
}

double cox_de_boor(const std::vector<double>& t, std::size_t j, int p, double u) {
  if (p == 0) {
    if (t[j] <= u && u < t[j + 1]) return 1.0;
    // Close the last nonempty span at its right end.
    if (u == t[j + 1] && t[j] < t[j + 1]) {
      bool last = true;
      for (std::size_t k = j + 1; k + 1 < t.size(); ++k) {
        if (t[k] < t[k + 1]) last = false;
      }
      return last ? 1.0 : 0.0;
    }
    return 0.0;
  }
  const auto pp = static_cast<std::size_t>(p);
  double a = 0.0;
  double b = 0.0;
  const double d1 = t[j + pp] - t[j];
  const double d2 = t[j + pp + 1] - t[j + 1];
  if (d1 > 0.0) a = (u - t[j]) / d1 * cox_de_boor(t, j, p - 1, u);
  if (d2 > 0.0) b = (t[j + pp + 1] - u) / d2 * cox_de_boor(t, j + 1, p - 1, u);
  return a + b;
}

std::vector<double> pinv_solve(std::span<const double> A, std::size_t rows, std::size_t cols, std::span<const double> b,
                               double rcond) {
  Eigen::MatrixXd M(static_cast<long>(rows), static_cast<long>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) M(static_cast<long>(i), static_cast<long>(j)) = A[i * cols + j];
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<long>(rows));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = rcond * (s.size() ? s(0) : 0.0);
  Eigen::VectorXd uty = svd.matrixU().transpose() * y;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<long>(cols));
  for (long i = 0; i < s.size(); ++i) {
    if (s(i) > cut) z(i) = uty(i) / s(i);
  }
  const Eigen::VectorXd x = svd.matrixV() * z;
  return {x.data(), x.data() + x.size()};
}

std::vector<double> kronecker_solve(std::span<const double> A1, std::size_t m1, std::size_t n1,
                                    std::span<const double> A2, std::size_t m2, std::size_t n2,
                                    std::span<const double> F) {
  std::vector<double> K(m1 * m2 * n1 * n2);
  const std::size_t cols = n1 * n2;
  for (std::size_t i1 = 0; i1 < m1; ++i1) {
    for (std::size_t i2 = 0; i2 < m2; ++i2) {
      for (std::size_t j1 = 0; j1 < n1; ++j1) {
        for (std::size_t j2 = 0; j2 < n2; ++j2) K[(i1 * m2 + i2) * cols + j1 * n2 + j2] = A1[i1 * n1 + j1] * A2[i2 * n2 + j2];
      }
    }
  }
  return pinv_solve(K, m1 * m2, cols, F);
}

}  // namespace oracle
