#pragma once

// Dynamics of the closed majorant system in the (d, rho) phase plane:
//
//   d'   = -d^2 / n - (rho - 1)
//   rho' = -d rho
//
// together with the closed-form Riccati blow-up time bounds that hold inside
// the blow-up region.

#include "eplab/integrator.hpp"
#include "eplab/threshold.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

namespace eplab {

using Vec2 = Eigen::Vector2d;

/// Right-hand side of the majorant system, returned as (d', rho').
[[nodiscard]] inline PhaseState majorant_rhs(PhaseState s, Dimension n) noexcept {
  return {-s.d * s.d / n.real() - (s.rho - 1.0), -s.d * s.rho};
}

struct IntegratorControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_time = 100.0;
  double blowup_rho = 1e6;
  double blowup_d = -1e6;
  std::size_t max_steps = 1'000'000;
  /// Terminate with LeftDomain once rho falls to this value; 0 disables.
  double min_rho = 0.0;
  /// Integrate towards t = -max_time instead of +max_time.
  bool reverse_time = false;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("integrator tolerances must be > 0");
    if (!(blowup_rho > 1.0)) throw DomainError("blowup_rho must be > 1");
    if (!(blowup_d < 0.0)) throw DomainError("blowup_d must be < 0");
    if (!(max_time > 0.0)) throw DomainError("max_time must be > 0");
    if (max_steps == 0) throw DomainError("max_steps must be positive");
    if (min_rho < 0.0) throw DomainError("min_rho must be >= 0");
  }

  [[nodiscard]] ode::StepControls step_controls() const {
    ode::StepControls c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.max_steps = max_steps;
    return c;
  }
};

enum class EventKind {
  BlowupDetected,
  LeftDomain,
  MaxTimeReached,
  StepLimitExceeded,
  StepSizeUnderflow,
};

[[nodiscard]] constexpr std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::BlowupDetected: return "BlowupDetected";
    case EventKind::LeftDomain: return "LeftDomain";
    case EventKind::MaxTimeReached: return "MaxTimeReached";
    case EventKind::StepLimitExceeded: return "StepLimitExceeded";
    case EventKind::StepSizeUnderflow: return "StepSizeUnderflow";
  }
  return "?";
}

struct TrajectoryEvent {
  EventKind kind;
  double t;
};

struct TrajectorySample {
  double t;
  PhaseState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  double initial_invariant = 0.0;
  /// max over samples of |I - I0| / max(1, |I0|).  Evaluating I loses
  /// accuracy like rho^(-2/n) as rho -> 0, so paths into the vacuum inflate it.
  double invariant_drift = 0.0;

  [[nodiscard]] std::optional<TrajectoryEvent> terminal_event() const {
    if (events.empty()) return std::nullopt;
    return events.back();
  }
  [[nodiscard]] bool blew_up() const {
    return !events.empty() && events.back().kind == EventKind::BlowupDetected;
  }
  [[nodiscard]] const TrajectorySample& back() const { return samples.back(); }
};

namespace detail {

inline EventKind event_from_status(ode::Status s) {
  switch (s) {
    case ode::Status::ReachedEnd: return EventKind::MaxTimeReached;
    case ode::Status::StepLimitExceeded: return EventKind::StepLimitExceeded;
    case ode::Status::StepSizeUnderflow: return EventKind::StepSizeUnderflow;
    case ode::Status::StoppedByObserver: break;
  }
  return EventKind::MaxTimeReached;
}

}  // namespace detail

/// Integrates the majorant system from a non-vacuum state until a blow-up
/// threshold is crossed, rho leaves the domain, or max_time elapses.  Every
/// accepted step is recorded together with the drift of the path invariant.
[[nodiscard]] inline Trajectory integrate_majorant(PhaseState start, Dimension n,
                                                   const IntegratorControls& controls = {}) {
  controls.validate();
  if (!(start.rho > 0.0) || !std::isfinite(start.d) || !std::isfinite(start.rho))
    throw DomainError("integrate_majorant requires a finite non-vacuum start (rho > 0)");

  Trajectory traj;
  traj.initial_invariant = invariant_I(start, n);
  traj.samples.push_back({0.0, start});
  const double drift_scale = std::max(1.0, std::abs(traj.initial_invariant));

  auto rhs = [n](double, const Vec2& y) {
    const PhaseState f = majorant_rhs({y[0], y[1]}, n);
    return Vec2(f.d, f.rho);
  };
  std::optional<TrajectoryEvent> stop_event;
  auto observe = [&](double t, const Vec2& y) {
    const PhaseState s{y[0], y[1]};
    traj.samples.push_back({t, s});
    traj.invariant_drift =
        std::max(traj.invariant_drift, std::abs(invariant_I(s, n) - traj.initial_invariant) / drift_scale);
    if (s.rho >= controls.blowup_rho || s.d <= controls.blowup_d) {
      stop_event = TrajectoryEvent{EventKind::BlowupDetected, t};
      return false;
    }
    if (controls.min_rho > 0.0 && s.rho <= controls.min_rho) {
      stop_event = TrajectoryEvent{EventKind::LeftDomain, t};
      return false;
    }
    return true;
  };
  auto admissible = [](const Vec2& y) { return y[1] > 0.0; };

  const double t_end = controls.reverse_time ? -controls.max_time : controls.max_time;
  const auto outcome =
      ode::integrate(rhs, 0.0, Vec2(start.d, start.rho), t_end, controls.step_controls(), observe, admissible);

  if (stop_event) {
    traj.events.push_back(*stop_event);
  } else {
    traj.events.push_back({detail::event_from_status(outcome.status), outcome.t});
  }
  return traj;
}

enum class BoundCase { Case1, Case2, NotApplicable };

[[nodiscard]] constexpr std::string_view to_string(BoundCase c) noexcept {
  switch (c) {
    case BoundCase::Case1: return "Case1";
    case BoundCase::Case2: return "Case2";
    case BoundCase::NotApplicable: return "NotApplicable";
  }
  return "?";
}

struct BlowupBounds {
  BoundCase case_kind = BoundCase::NotApplicable;
  double t_upper = std::numeric_limits<double>::infinity();
  double epsilon_used = 0.0;
  /// The state the bound is computed from, (d0 + eps, rho0 - eps).
  PhaseState shifted_start;
  double invariant = std::numeric_limits<double>::quiet_NaN();
};

/// Blow-up time of rho' = a rho^(1 + 1/n), rho(0) = rho0 > 0, a > 0.
[[nodiscard]] inline double riccati_density_blowup_time(double a, double rho0, Dimension n) {
  return n.real() / (a * std::pow(rho0, 1.0 / n.real()));
}

/// Time at which d' = -(d^2 + beta^2) / n, d(0) = d0, reaches -infinity.
/// For beta -> 0 this tends to n / |d0| (finite only for d0 < 0).
[[nodiscard]] inline double riccati_divergence_blowup_time(double beta, double d0, Dimension n) {
  const double nr = n.real();
  if (d0 < 0.0) {
    if (beta == 0.0) return nr / -d0;
    // pi/2 + atan(d0/beta) rewritten as atan(beta/|d0|) to avoid cancellation.
    return (nr / beta) * std::atan(beta / -d0);
  }
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  return (nr / beta) * (std::numbers::pi / 2.0 + std::atan(d0 / beta));
}

/// Upper bound on the majorant blow-up time started from (d0 + eps, rho0 - eps).
///
/// Case1 (I > 0, d < 0): d <= -rho^(1/n) sqrt(I) gives rho' >= sqrt(I) rho^(1+1/n).
/// Case2 (I <= 0, rho > 1): rho - 1 >= -I/2 gives d' <= -(d^2 + beta^2)/n with
/// beta^2 = n |I| / 2.
[[nodiscard]] inline BlowupBounds blowup_time_bounds(PhaseState start, Dimension n, double epsilon = 0.0) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be >= 0");
  BlowupBounds out;
  out.epsilon_used = epsilon;
  out.shifted_start = {start.d + epsilon, start.rho - epsilon};
  if (!(out.shifted_start.rho > 0.0)) return out;

  const Classification cls = classify(out.shifted_start, n);
  out.invariant = cls.invariant_value;
  const double nr = n.real();
  if (cls.verdict == Verdict::SupCriticalOmega1) {
    out.case_kind = BoundCase::Case1;
    out.t_upper = riccati_density_blowup_time(std::sqrt(cls.invariant_value), out.shifted_start.rho, n);
  } else if (cls.verdict == Verdict::SupCriticalOmega2) {
    out.case_kind = BoundCase::Case2;
    const double beta = std::sqrt(nr * std::max(-cls.invariant_value, 0.0) / 2.0);
    out.t_upper = riccati_divergence_blowup_time(beta, out.shifted_start.d, n);
  }
  return out;
}

/// Shift used to pass from the inequality system to the majorant: half the
/// margin to the critical curve, halved further until the shifted state is
/// still strictly inside the blow-up region.  Zero for states not inside it.
[[nodiscard]] inline double comparison_epsilon(PhaseState start, Dimension n) {
  const Classification cls = classify(start, n);
  if (!is_sup_critical(cls.verdict)) return 0.0;
  double eps = -cls.margin / 2.0;
  for (int i = 0; i < 64; ++i, eps /= 2.0) {
    const PhaseState shifted{start.d + eps, start.rho - eps};
    if (shifted.rho > 0.0 && is_sup_critical(classify(shifted, n).verdict)) return eps;
  }
  return 0.0;
}

}  // namespace eplab
