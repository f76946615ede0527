#pragma once

// Closed-form critical-threshold mathematics for the attractive, pressure-less
// Euler-Poisson system in the unit-free (c = 1, k = -1) normalization.
//
// The phase plane is spanned by the divergence d = div u and the density rho
// sampled along a particle path.  Everything in this header is a pure function
// of its arguments.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace eplab {

/// Thrown when an argument is outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Spatial dimension n >= 1.
class Dimension {
 public:
  explicit Dimension(int n) : n_(n) {
    if (n < 1) throw DomainError("dimension must be >= 1, got " + std::to_string(n));
  }
  [[nodiscard]] int value() const noexcept { return n_; }
  [[nodiscard]] double real() const noexcept { return static_cast<double>(n_); }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  int n_;
};

/// A point (d, rho) of the divergence-density phase plane.
struct PhaseState {
  double d = 0.0;
  double rho = 1.0;
  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Background density c > 0 and attractive forcing constant k < 0.
struct PhysicalParams {
  double c = 1.0;
  double k = -1.0;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("background density c must be > 0");
    if (!(k < 0.0) || !std::isfinite(k)) throw DomainError("forcing constant k must be < 0 (attractive case)");
  }
  /// sqrt(-k c), the factor relating physical and unit-free time.
  [[nodiscard]] double time_scale() const { return std::sqrt(-k * c); }
};

enum class Verdict {
  SupCriticalOmega1,
  SupCriticalOmega2,
  Boundary,
  NoBlowupGuaranteed,
  InvalidVacuum,
};

[[nodiscard]] constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::SupCriticalOmega1: return "SupCriticalOmega1";
    case Verdict::SupCriticalOmega2: return "SupCriticalOmega2";
    case Verdict::Boundary: return "Boundary";
    case Verdict::NoBlowupGuaranteed: return "NoBlowupGuaranteed";
    case Verdict::InvalidVacuum: return "InvalidVacuum";
  }
  return "?";
}

[[nodiscard]] constexpr bool is_sup_critical(Verdict v) noexcept {
  return v == Verdict::SupCriticalOmega1 || v == Verdict::SupCriticalOmega2;
}

struct Classification {
  Verdict verdict = Verdict::NoBlowupGuaranteed;
  double invariant_value = 0.0;  // I(d, rho); NaN for vacuum
  double margin = 0.0;           // d - sgn(rho - 1) sqrt(n F(rho))
};

enum class CriticalKind { Saddle, NodalSource, NodalSink };

[[nodiscard]] constexpr std::string_view to_string(CriticalKind k) noexcept {
  switch (k) {
    case CriticalKind::Saddle: return "Saddle";
    case CriticalKind::NodalSource: return "NodalSource";
    case CriticalKind::NodalSink: return "NodalSink";
  }
  return "?";
}

struct CriticalPoint {
  PhaseState location;
  CriticalKind kind;
};

inline constexpr double kDefaultBoundaryTol = 1e-9;

namespace detail {

// F for real-valued n.  Near rho = 1 the closed forms cancel catastrophically,
// so there F is summed from its Taylor series in s = ln(rho); the k = 1 terms
// cancel identically, which keeps F >= 0 down to round-off in s.
inline double evaluate_F_real(double rho, double n) {
  if (rho < 0.0 || std::isnan(rho)) throw DomainError("F(rho) requires rho >= 0");
  if (rho == 0.0) return 1.0;
  const double s = std::log(rho);
  const bool log_branch = (n == 2.0);
  if (std::abs(s) < 0.5) {
    double sum = 0.0;
    double sk_over_fact = s;  // s^k / k!
    for (int k = 2; k <= 40; ++k) {
      sk_over_fact *= s / k;
      const double coeff = log_branch
                               ? static_cast<double>(k - 1)
                               : (2.0 - std::pow(2.0, k) * std::pow(n, 1 - k)) / (n - 2.0);
      const double term = coeff * sk_over_fact;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  if (log_branch) return 1.0 - rho + rho * s;
  return 1.0 + 2.0 * rho / (n - 2.0) - n * std::exp(2.0 * s / n) / (n - 2.0);
}

inline double sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

}  // namespace detail

/// F(rho) >= 0, the potential-like function whose zero level set gives the
/// separatrix.  For n = 1 this reduces to (1 - rho)^2.
[[nodiscard]] inline double evaluate_F(double rho, Dimension n) {
  if (n.value() == 1) {
    if (rho < 0.0 || std::isnan(rho)) throw DomainError("F(rho) requires rho >= 0");
    return (1.0 - rho) * (1.0 - rho);
  }
  return detail::evaluate_F_real(rho, n.real());
}

/// F''(rho) = (2/n) rho^(2/n - 2).
[[nodiscard]] inline double F_second_derivative(double rho, Dimension n) {
  if (!(rho > 0.0)) throw DomainError("F''(rho) requires rho > 0");
  const double nr = n.real();
  return (2.0 / nr) * std::pow(rho, 2.0 / nr - 2.0);
}

/// Path invariant I(d, rho) = rho^(-2/n) (d^2 - n F(rho)) of the majorant system.
[[nodiscard]] inline double invariant_I(PhaseState s, Dimension n) {
  if (!(s.rho > 0.0)) throw DomainError("invariant requires a non-vacuum state (rho > 0)");
  const double nr = n.real();
  // Factored as (|d| - r)(|d| + r) so that points on the separatrix give exactly 0.
  const double r = std::sqrt(nr * evaluate_F(s.rho, n));
  const double a = std::abs(s.d);
  return std::pow(s.rho, -2.0 / nr) * ((a - r) * (a + r));
}

/// Signed distance in d from the critical curve d = sgn(rho-1) sqrt(n F(rho)).
[[nodiscard]] inline double threshold_margin(PhaseState s, Dimension n) {
  return s.d - detail::sign(s.rho - 1.0) * std::sqrt(n.real() * evaluate_F(s.rho, n));
}

/// Sup-critical test.  Points within boundary_tol of the critical curve are
/// reported as Boundary; the blow-up region is open.
[[nodiscard]] inline Classification classify(PhaseState s, Dimension n,
                                             double boundary_tol = kDefaultBoundaryTol) {
  if (!(boundary_tol > 0.0)) throw DomainError("boundary_tol must be > 0");
  if (s.rho < 0.0 || std::isnan(s.rho)) throw DomainError("classify requires rho >= 0");
  if (std::isnan(s.d)) throw DomainError("classify requires a finite divergence");

  Classification out;
  out.margin = threshold_margin(s, n);
  if (s.rho == 0.0) {
    out.verdict = Verdict::InvalidVacuum;
    out.invariant_value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.invariant_value = invariant_I(s, n);
  if (std::abs(out.margin) <= boundary_tol) {
    out.verdict = Verdict::Boundary;
  } else if (out.margin > 0.0) {
    out.verdict = Verdict::NoBlowupGuaranteed;
  } else if (out.invariant_value > 0.0 && s.d < 0.0) {
    out.verdict = Verdict::SupCriticalOmega1;
  } else {
    // margin < 0 and not in Omega1 forces rho > 1 and I <= 0.  I == 0 only on
    // the continuation d = -sqrt(nF) of the left branch above rho = 1.
    out.verdict = Verdict::SupCriticalOmega2;
  }
  return out;
}

/// Left and right separatrix branches (-sqrt(nF), +sqrt(nF)) at density rho.
[[nodiscard]] inline std::pair<double, double> separatrix(double rho, Dimension n) {
  if (rho < 0.0 || std::isnan(rho)) throw DomainError("separatrix requires rho >= 0");
  const double r = std::sqrt(n.real() * evaluate_F(rho, n));
  return {-r, r};
}

/// Critical points of the majorant field: saddle (0,1), source (-sqrt n, 0), sink (+sqrt n, 0).
[[nodiscard]] inline std::array<CriticalPoint, 3> critical_points(Dimension n) {
  const double r = std::sqrt(n.real());
  return {{{{0.0, 1.0}, CriticalKind::Saddle},
           {{-r, 0.0}, CriticalKind::NodalSource},
           {{r, 0.0}, CriticalKind::NodalSink}}};
}

/// Maps a physical state to unit-free variables: (d / sqrt(-kc), rho / c).
[[nodiscard]] inline PhaseState rescale_physical(PhaseState s, const PhysicalParams& p) {
  p.validate();
  if (s.rho < 0.0 || std::isnan(s.rho)) throw DomainError("rescale requires rho >= 0");
  return {s.d / p.time_scale(), s.rho / p.c};
}

/// Evaluates the sup-critical condition directly in physical variables,
/// d < sgn(rho - c) sqrt(-n k c F(rho / c)).  boundary_tol is measured in the
/// unit-free margin, so the verdict matches classify(rescale_physical(...)).
[[nodiscard]] inline Classification classify_physical(PhaseState s, Dimension n, const PhysicalParams& p,
                                                      double boundary_tol = kDefaultBoundaryTol) {
  p.validate();
  if (!(boundary_tol > 0.0)) throw DomainError("boundary_tol must be > 0");
  if (s.rho < 0.0 || std::isnan(s.rho)) throw DomainError("classify requires rho >= 0");
  const double nr = n.real();
  const double scaled_rho = s.rho / p.c;
  const double nkcF = -nr * p.k * p.c * evaluate_F(scaled_rho, n);

  Classification out;
  out.margin = (s.d - detail::sign(s.rho - p.c) * std::sqrt(nkcF)) / p.time_scale();
  if (s.rho == 0.0) {
    out.verdict = Verdict::InvalidVacuum;
    out.invariant_value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.invariant_value = std::pow(scaled_rho, -2.0 / nr) * (s.d * s.d - nkcF) / (-p.k * p.c);
  if (std::abs(out.margin) <= boundary_tol) {
    out.verdict = Verdict::Boundary;
  } else if (out.margin > 0.0) {
    out.verdict = Verdict::NoBlowupGuaranteed;
  } else if (out.invariant_value > 0.0 && s.d < 0.0) {
    out.verdict = Verdict::SupCriticalOmega1;
  } else {
    out.verdict = Verdict::SupCriticalOmega2;
  }
  return out;
}

/// Membership in the earlier one-sided blow-up region d < -sqrt(-n k c).
[[nodiscard]] inline bool chae_tadmor_member(PhaseState s, Dimension n, const PhysicalParams& p = {}) {
  p.validate();
  return s.d < -std::sqrt(-n.real() * p.k * p.c);
}

}  // namespace eplab
