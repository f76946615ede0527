#pragma once

// Independent reference computations used only by tests.  None of these call
// into the library's evaluation paths.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace oracle {

// F(rho) = (2/n) rho^(2/n) \int_1^rho (1 - 1/r) r^(-2/n) dr, with r = e^s:
// \int_0^{ln rho} (e^s - 1) e^(-2s/n) ds, by composite Simpson.
inline double F_quadrature(double rho, double n, int intervals = 4000) {
  const double upper = std::log(rho);
  const double h = upper / intervals;
  auto f = [n](double s) { return std::expm1(s) * std::exp(-2.0 * s / n); };
  double sum = f(0.0) + f(upper);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  const double integral = sum * h / 3.0;
  return (2.0 / n) * std::pow(rho, 2.0 / n) * integral;
}

// Sup-critical membership written directly from the region's one-line description.
inline bool in_blowup_region(double d, double rho, double n) {
  const double F = F_quadrature(rho, n, 400);
  const double sgn = (rho > 1.0) - (rho < 1.0);
  return d < sgn * std::sqrt(n * F);
}

// Exact blow-up time of the n = 1 majorant started at (d0, rho0): the
// specific volume J = rho0 / rho satisfies J'' = J - rho0, so
// J(t) = rho0 + (1 - rho0) cosh t + d0 sinh t and blow-up is its first zero.
// Returns +inf if J stays positive.
inline double exact_1d_blowup_time(double d0, double rho0, double t_max = 50.0) {
  auto J = [&](double t) { return rho0 + (1.0 - rho0) * std::cosh(t) + d0 * std::sinh(t); };
  const double dt = 1e-3;
  double a = 0.0;
  for (double b = dt; b <= t_max; a = b, b += dt) {
    if (J(b) <= 0.0) {
      for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (J(m) > 0.0 ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
  }
  return std::numeric_limits<double>::infinity();
}

struct EigenSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

inline EigenSums eigen_sums_general(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  EigenSums out;
  std::complex<double> s = 0.0, s2 = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const std::complex<double> l = es.eigenvalues()[i];
    s += l;
    s2 += l * l;
  }
  out.sum = s.real();
  out.sum_sq = s2.real();
  return out;
}

inline EigenSums eigen_sums_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  EigenSums out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.sum += es.eigenvalues()[i];
    out.sum_sq += es.eigenvalues()[i] * es.eigenvalues()[i];
  }
  return out;
}

}  // namespace oracle
