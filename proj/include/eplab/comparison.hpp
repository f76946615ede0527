#pragma once

// Comparison harness between the inequality system
//
//   d'   = -d^2/n - (rho - 1) - excess(t),   rho'  = -d rho
//
// (excess >= 0 stands in for sum lambda_S^2 - d^2/n) and the majorant system
//
//   e'   = -e^2/n - (zeta - 1),              zeta' = -e zeta.
//
// Starting from d(0) < e(0), 0 < zeta(0) < rho(0), the ordering must persist
// for as long as both solutions stay finite.

#include "eplab/integrator.hpp"
#include "eplab/phase_plane.hpp"
#include "eplab/threshold.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace eplab {

/// Nonnegative excess forcing: monotone piecewise-cubic Hermite interpolation
/// (Fritsch-Carlson slopes) of user samples, clamped at zero and held constant
/// outside the sampled interval.
class ExcessProfile {
 public:
  ExcessProfile() : ExcessProfile({0.0}, {0.0}) {}

  ExcessProfile(std::vector<double> times, std::vector<double> values)
      : t_(std::move(times)), v_(std::move(values)) {
    if (t_.empty() || t_.size() != v_.size()) throw DomainError("excess profile needs matching, non-empty samples");
    for (std::size_t i = 1; i < t_.size(); ++i)
      if (!(t_[i] > t_[i - 1])) throw DomainError("excess sample times must increase");
    for (double& v : v_) {
      if (!std::isfinite(v)) throw DomainError("excess samples must be finite");
      v = std::max(v, 0.0);
    }
    slopes();
  }

  static ExcessProfile zero() { return {}; }

  [[nodiscard]] double operator()(double t) const {
    if (t <= t_.front()) return v_.front();
    if (t >= t_.back()) return v_.back();
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
    const std::size_t lo = hi - 1;
    const double h = t_[hi] - t_[lo];
    const double s = (t - t_[lo]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double value = (2 * s3 - 3 * s2 + 1) * v_[lo] + (s3 - 2 * s2 + s) * h * m_[lo] +
                         (-2 * s3 + 3 * s2) * v_[hi] + (s3 - s2) * h * m_[hi];
    return std::max(value, 0.0);
  }

 private:
  void slopes() {
    const std::size_t n = t_.size();
    m_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (v_[i + 1] - v_[i]) / (t_[i + 1] - t_[i]);
    m_.front() = delta.front();
    m_.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
      const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
      m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }

  std::vector<double> t_, v_, m_;
};

enum class Ordering { Strict, NonStrict };

struct ComparisonResult {
  Trajectory lower;
  Trajectory upper;
  std::size_t checked_steps = 0;
  std::size_t violations = 0;
  std::optional<double> first_violation_time;
  /// Event that ended the co-integration.
  TrajectoryEvent stop{EventKind::MaxTimeReached, 0.0};

  [[nodiscard]] bool ordered() const { return violations == 0; }
};

/// Co-integrates both systems on one adaptive time grid and checks the
/// ordering d < e, 0 < zeta < rho at every accepted step.
[[nodiscard]] inline ComparisonResult integrate_comparison(PhaseState lower0, PhaseState upper0,
                                                           const ExcessProfile& excess, Dimension n,
                                                           const IntegratorControls& controls = {},
                                                           Ordering ordering = Ordering::Strict) {
  controls.validate();
  auto in_order = [ordering](PhaseState lo, PhaseState up) {
    if (ordering == Ordering::Strict) return lo.d < up.d && 0.0 < up.rho && up.rho < lo.rho;
    return lo.d <= up.d && 0.0 < up.rho && up.rho <= lo.rho;
  };
  if (!in_order(lower0, upper0))
    throw DomainError("comparison requires d(0) < e(0) and 0 < zeta(0) < rho(0)");

  using Vec4 = Eigen::Vector4d;
  const double nr = n.real();
  ComparisonResult out;
  out.lower.initial_invariant = invariant_I(lower0, n);
  out.upper.initial_invariant = invariant_I(upper0, n);
  out.lower.samples.push_back({0.0, lower0});
  out.upper.samples.push_back({0.0, upper0});

  auto rhs = [&](double t, const Vec4& y) {
    return Vec4(-y[0] * y[0] / nr - (y[1] - 1.0) - excess(t), -y[0] * y[1], -y[2] * y[2] / nr - (y[3] - 1.0),
                -y[2] * y[3]);
  };
  auto crossed = [&](PhaseState s) { return s.rho >= controls.blowup_rho || s.d <= controls.blowup_d; };
  std::optional<TrajectoryEvent> stop;
  auto observe = [&](double t, const Vec4& y) {
    const PhaseState lo{y[0], y[1]}, up{y[2], y[3]};
    out.lower.samples.push_back({t, lo});
    out.upper.samples.push_back({t, up});
    for (auto [traj, s] : {std::pair{&out.lower, lo}, std::pair{&out.upper, up}}) {
      const double scale = std::max(1.0, std::abs(traj->initial_invariant));
      traj->invariant_drift = std::max(traj->invariant_drift, std::abs(invariant_I(s, n) - traj->initial_invariant) / scale);
    }
    ++out.checked_steps;
    if (!in_order(lo, up)) {
      if (!out.first_violation_time) out.first_violation_time = t;
      ++out.violations;
    }
    const bool lower_done = crossed(lo), upper_done = crossed(up);
    if (lower_done) out.lower.events.push_back({EventKind::BlowupDetected, t});
    if (upper_done) out.upper.events.push_back({EventKind::BlowupDetected, t});
    if (lower_done || upper_done) {
      stop = TrajectoryEvent{EventKind::BlowupDetected, t};
      return false;
    }
    return true;
  };
  auto admissible = [](const Vec4& y) { return y[1] > 0.0 && y[3] > 0.0; };

  const auto outcome = ode::integrate(rhs, 0.0, Vec4(lower0.d, lower0.rho, upper0.d, upper0.rho), controls.max_time,
                                      controls.step_controls(), observe, admissible);
  if (stop) {
    out.stop = *stop;
  } else {
    out.stop = {detail::event_from_status(outcome.status), outcome.t};
    out.lower.events.push_back(out.stop);
    out.upper.events.push_back(out.stop);
  }
  return out;
}

}  // namespace eplab

