#pragma once

// Adaptive Dormand-Prince 5(4) integrator with PI step-size control.
//
// Works on any fixed or dynamic Eigen column vector.  The caller observes
// every accepted step and may stop the integration from the observer; a
// separate admissibility predicate lets the caller reject steps that leave
// the state's domain (for instance a density that turns negative).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace eplab::ode {

struct StepControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the initial derivative
  double min_step = 1e-14;    // relative to max(1, |t|)
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 1'000'000;
};

enum class Status {
  ReachedEnd,
  StoppedByObserver,
  StepLimitExceeded,
  StepSizeUnderflow,
};

template <class Vector>
struct Outcome {
  Status status = Status::ReachedEnd;
  double t = 0.0;
  Vector y;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

// Dormand & Prince (1980) coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, the embedded error weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class Vector>
double error_norm(const Vector& err, const Vector& y0, const Vector& y1, const StepControls& c) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = c.abs_tol + c.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

template <class Vector>
bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return false;
  return true;
}

}  // namespace detail

struct AlwaysAdmissible {
  template <class Vector>
  bool operator()(const Vector&) const noexcept {
    return true;
  }
};

/// Integrates y' = rhs(t, y) from t0 towards t_end (either direction).
///
/// `observe(t, y)` runs after every accepted step and returns false to stop.
/// `admissible(y)` is consulted on every trial step; inadmissible or
/// non-finite trial states are treated as rejected steps.
template <class Vector, class Rhs, class Observer, class Admissible = AlwaysAdmissible>
Outcome<Vector> integrate(Rhs&& rhs, double t0, Vector y0, double t_end, const StepControls& controls,
                          Observer&& observe, Admissible&& admissible = {}) {
  Outcome<Vector> out;
  out.t = t0;
  out.y = y0;
  if (t_end == t0) return out;

  const double dir = t_end > t0 ? 1.0 : -1.0;
  constexpr double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
  constexpr double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;

  Vector k1 = rhs(t0, y0);
  double h = controls.initial_step;
  if (h <= 0.0) {
    const double ynorm = std::max(y0.cwiseAbs().maxCoeff(), 1e-5);
    const double dnorm = k1.cwiseAbs().maxCoeff();
    h = dnorm > 1e-5 ? 0.01 * ynorm / dnorm : 1e-3;
    h = std::clamp(h, 1e-10, 0.1);
  }
  h = std::min({h, controls.max_step, std::abs(t_end - t0)});

  double t = t0;
  Vector y = y0;
  double err_prev = 1e-4;
  bool last_rejected = false;

  while (true) {
    if (out.accepted >= controls.max_steps) {
      out.status = Status::StepLimitExceeded;
      break;
    }
    if (h < controls.min_step * std::max(1.0, std::abs(t))) {
      out.status = Status::StepSizeUnderflow;
      break;
    }
    bool final_step = false;
    if (h >= std::abs(t_end - t)) {
      h = std::abs(t_end - t);
      final_step = true;
    }
    const double hs = dir * h;

    const Vector k2 = rhs(t + detail::c2 * hs, Vector(y + hs * detail::a21 * k1));
    const Vector k3 = rhs(t + detail::c3 * hs, Vector(y + hs * (detail::a31 * k1 + detail::a32 * k2)));
    const Vector k4 = rhs(t + detail::c4 * hs,
                          Vector(y + hs * (detail::a41 * k1 + detail::a42 * k2 + detail::a43 * k3)));
    const Vector k5 = rhs(t + detail::c5 * hs, Vector(y + hs * (detail::a51 * k1 + detail::a52 * k2 +
                                                                 detail::a53 * k3 + detail::a54 * k4)));
    const Vector k6 = rhs(t + hs, Vector(y + hs * (detail::a61 * k1 + detail::a62 * k2 + detail::a63 * k3 +
                                                   detail::a64 * k4 + detail::a65 * k5)));
    const Vector y_new = y + hs * (detail::b1 * k1 + detail::b3 * k3 + detail::b4 * k4 + detail::b5 * k5 +
                                   detail::b6 * k6);

    bool ok = detail::all_finite(y_new) && admissible(y_new);
    Vector k7;
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      k7 = rhs(t + hs, y_new);
      ok = detail::all_finite(k7);
    }
    if (ok) {
      const Vector e = hs * (detail::e1 * k1 + detail::e3 * k3 + detail::e4 * k4 + detail::e5 * k5 +
                             detail::e6 * k6 + detail::e7 * k7);
      err = detail::error_norm(e, y, y_new, controls);
      ok = std::isfinite(err);
    }

    if (ok && err <= 1.0) {
      t = final_step ? t_end : t + hs;
      y = y_new;
      k1 = k7;
      ++out.accepted;
      const bool keep_going = observe(t, static_cast<const Vector&>(y));
      double fac = err == 0.0 ? fac_max
                              : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
      fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
      err_prev = std::max(err, 1e-4);
      last_rejected = false;
      h = std::min(h * fac, controls.max_step);
      if (!keep_going) {
        out.status = Status::StoppedByObserver;
        break;
      }
      if (final_step) {
        out.status = Status::ReachedEnd;
        break;
      }
    } else {
      ++out.rejected;
      const double fac = ok ? std::max(fac_min, safety * std::pow(err, -1.0 / 5.0)) : 0.25;
      h *= fac;
      last_rejected = true;
    }
  }
  out.t = t;
  out.y = y;
  return out;
}

}  // namespace eplab::ode
