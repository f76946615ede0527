#pragma once

// Velocity-gradient algebra: M = S + A, the eigen-sum trace identities
//
//   sum lambda_M   = sum lambda_S = div u
//   sum lambda_M^2 = sum lambda_S^2 - |omega|^2 / 2
//
// and the evolution A' = -(A S + S A) of the skew part along a particle path.
//
// Index convention: M(i, j) = du_j / dx_i.  The vorticity vector lists, for
// each pair i < j in row-major order, omega = du_j/dx_i - du_i/dx_j = 2 A(i, j);
// in 2D this is du_2/dx_1 - du_1/dx_2.

#include "eplab/integrator.hpp"
#include "eplab/threshold.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace eplab::spectral {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr Eigen::Index kMaxDimension = 16;

struct GradientDecomposition {
  Matrix sym;
  Matrix skew;
  Vector vorticity;
  double divergence = 0.0;
};

namespace detail {

inline void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DomainError("velocity gradient must be a non-empty square matrix");
}

}  // namespace detail

[[nodiscard]] inline Vector pack_vorticity(const Matrix& skew) {
  const Eigen::Index n = skew.rows();
  Vector w(n * (n - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) w[k++] = 2.0 * skew(i, j);
  return w;
}

/// Inverse of pack_vorticity: the skew matrix whose packed vorticity is w.
[[nodiscard]] inline Matrix unpack_vorticity(const Vector& w, Eigen::Index n) {
  if (w.size() != n * (n - 1) / 2) throw DomainError("vorticity length does not match dimension");
  Matrix a = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = 0.5 * w[k];
      a(j, i) = -0.5 * w[k];
      ++k;
    }
  return a;
}

[[nodiscard]] inline GradientDecomposition decompose(const Matrix& m) {
  detail::require_square(m);
  GradientDecomposition out;
  out.sym = 0.5 * (m + m.transpose());
  out.skew = 0.5 * (m - m.transpose());
  out.vorticity = pack_vorticity(out.skew);
  out.divergence = m.trace();
  return out;
}

struct TraceReport {
  double sum_lambda_m = 0.0;     // tr M
  double sum_lambda_m_sq = 0.0;  // tr M^2
  double sum_lambda_s = 0.0;     // tr S
  double sum_lambda_s_sq = 0.0;  // tr S^2
  double vorticity_sq = 0.0;     // |omega|^2
  double divergence = 0.0;
  double residual_sum1 = 0.0;    // max(|sum lambda_M - sum lambda_S|, |sum lambda_S - div u|)
  double residual_sum2 = 0.0;    // |sum lambda_M^2 - (sum lambda_S^2 - |omega|^2 / 2)|
};

/// Eigenvalue sums computed as traces; no eigensolver is involved.
[[nodiscard]] inline TraceReport trace_identities(const Matrix& m) {
  detail::require_square(m);
  if (m.rows() > kMaxDimension) throw DomainError("trace_identities supports n <= 16");
  const GradientDecomposition dec = decompose(m);
  TraceReport r;
  r.sum_lambda_m = m.trace();
  r.sum_lambda_m_sq = (m * m).trace();
  r.sum_lambda_s = dec.sym.trace();
  r.sum_lambda_s_sq = dec.sym.squaredNorm();
  r.vorticity_sq = dec.vorticity.squaredNorm();
  r.divergence = dec.divergence;
  r.residual_sum1 = std::max(std::abs(r.sum_lambda_m - r.sum_lambda_s), std::abs(r.sum_lambda_s - r.divergence));
  r.residual_sum2 = std::abs(r.sum_lambda_m_sq - (r.sum_lambda_s_sq - 0.5 * r.vorticity_sq));
  return r;
}

/// sum lambda_S^2 - d^2 / n >= 0; zero iff S is a multiple of the identity.
[[nodiscard]] inline double cauchy_schwarz_gap(const GradientDecomposition& dec) {
  const double n = static_cast<double>(dec.sym.rows());
  return dec.sym.squaredNorm() - dec.divergence * dec.divergence / n;
}

/// Symmetric matrices sampled in time, linearly interpolated in between and
/// held constant outside the sampled interval.
class SymmetricPath {
 public:
  SymmetricPath(std::vector<double> times, std::vector<Matrix> samples)
      : times_(std::move(times)), samples_(std::move(samples)) {
    if (times_.empty() || times_.size() != samples_.size())
      throw DomainError("symmetric path needs matching, non-empty times and samples");
    for (std::size_t i = 1; i < times_.size(); ++i)
      if (!(times_[i] > times_[i - 1])) throw DomainError("symmetric path times must increase");
    const Eigen::Index n = samples_.front().rows();
    for (const Matrix& s : samples_)
      if (s.rows() != n || s.cols() != n) throw DomainError("symmetric path samples have inconsistent shapes");
  }

  /// Constant path.
  static SymmetricPath constant(const Matrix& s) { return SymmetricPath({0.0}, {s}); }

  [[nodiscard]] Eigen::Index dimension() const { return samples_.front().rows(); }

  [[nodiscard]] Matrix at(double t) const {
    if (t <= times_.front()) return samples_.front();
    if (t >= times_.back()) return samples_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return (1.0 - w) * samples_[lo] + w * samples_[hi];
  }

 private:
  std::vector<double> times_;
  std::vector<Matrix> samples_;
};

using SkewObserver = std::function<void(double, const Matrix&)>;

/// Integrates A' = -(A S + S A) from A(0) = a0 to t_end.  Only the strict
/// upper triangle is integrated, so every accepted state is exactly skew, and
/// a0 = 0 stays exactly 0.
[[nodiscard]] inline Matrix evolve_skew(const Matrix& a0, const SymmetricPath& path, double t_end,
                                        const ode::StepControls& controls = {}, const SkewObserver& observe = {}) {
  detail::require_square(a0);
  const Eigen::Index n = a0.rows();
  if (path.dimension() != n) throw DomainError("skew matrix and symmetric path have different shapes");
  if (!((a0 + a0.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a0.cwiseAbs().maxCoeff())))
    throw DomainError("initial matrix is not skew-symmetric");
  if (n == 1) return Matrix::Zero(1, 1);
  if (t_end == 0.0) return unpack_vorticity(pack_vorticity(a0), n);

  auto rhs = [&](double t, const Vector& w) {
    const Matrix a = unpack_vorticity(w, n);
    const Matrix s = path.at(t);
    return Vector(pack_vorticity(-(a * s + s * a)));
  };
  auto observer = [&](double t, const Vector& w) {
    if (observe) observe(t, unpack_vorticity(w, n));
    return true;
  };
  const auto out = ode::integrate(rhs, 0.0, pack_vorticity(a0), t_end, controls, observer);
  if (out.status != ode::Status::ReachedEnd) throw DomainError("skew evolution did not reach t_end");
  return unpack_vorticity(out.y, n);
}

}  // namespace eplab::spectral
