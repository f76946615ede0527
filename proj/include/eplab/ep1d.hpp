#pragma once

// Periodic 1D pressure-less Euler-Poisson solver in unit-free form
//
//   rho_t + (rho u)_x = 0
//   u_t + u u_x       = -phi_x,   phi_xx = rho - 1,
//
// on [0, L).  In one dimension the divergence u_x and the density along a
// particle path obey the majorant ODE with n = 1 exactly, so this solver
// serves as ground truth for the pointwise threshold.

#include "eplab/phase_plane.hpp"
#include "eplab/threshold.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eplab::ep1d {

/// Raised when the discrete solution stops being a valid state (NaN,
/// negative density, lost mass).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Grid1D {
  int cells = 256;
  double length = 2.0 * std::numbers::pi;

  void validate() const {
    if (cells < 16) throw DomainError("grid needs at least 16 cells");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be > 0");
  }
  [[nodiscard]] double dx() const { return length / cells; }
  /// Cell-centre coordinate of cell i.
  [[nodiscard]] double x(int i) const { return (i + 0.5) * dx(); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(cells); }
};

struct FieldState1D {
  std::vector<double> rho;
  std::vector<double> u;
  double t = 0.0;
};

enum class Scheme { FV1, SSP2 };
enum class Derivative { Spectral, Centered };

[[nodiscard]] constexpr std::string_view to_string(Scheme s) noexcept {
  return s == Scheme::FV1 ? "fv1" : "ssp2";
}
[[nodiscard]] constexpr std::string_view to_string(Derivative d) noexcept {
  return d == Derivative::Spectral ? "spectral" : "centered";
}

inline constexpr double kMeanTolerance = 1e-10;

[[nodiscard]] inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Discrete mass sum(rho) dx.
[[nodiscard]] inline double mass(std::span<const double> rho, const Grid1D& grid) {
  return std::accumulate(rho.begin(), rho.end(), 0.0) * grid.dx();
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

/// Fourier-space operators on a fixed periodic grid: the Poisson force and
/// spectral differentiation.  Owns its FFTW plans; not shareable across
/// threads, but independent instances may run concurrently.
class PeriodicSpectral {
 public:
  explicit PeriodicSpectral(const Grid1D& grid) : grid_(grid) {
    grid_.validate();
    const int n = grid_.cells;
    real_ = fftw_alloc_real(n);
    modes_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real_, modes_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, modes_, real_, FFTW_ESTIMATE);
  }
  ~PeriodicSpectral() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(modes_);
  }
  PeriodicSpectral(const PeriodicSpectral&) = delete;
  PeriodicSpectral& operator=(const PeriodicSpectral&) = delete;

  [[nodiscard]] const Grid1D& grid() const { return grid_; }

  /// f = -phi_x with phi_xx = rho - 1 and zero-mean phi.
  void force(std::span<const double> rho, std::span<double> out) {
    check_mean(rho);
    // mode m: f_hat = i (rho - 1)_hat / k
    apply(rho, out, [](std::complex<double> c, double k) { return std::complex<double>(0.0, 1.0) * c / k; });
  }

  /// Zero-mean potential phi with phi_xx = rho - 1.
  void potential(std::span<const double> rho, std::span<double> out) {
    check_mean(rho);
    apply(rho, out, [](std::complex<double> c, double k) { return -c / (k * k); });
  }

  /// Spectral derivative of a periodic sample vector.
  void derivative(std::span<const double> v, std::span<double> out) {
    apply(v, out, [](std::complex<double> c, double k) { return std::complex<double>(0.0, k) * c; });
  }

 private:
  void check_mean(std::span<const double> rho) const {
    const double m = mean(rho);
    if (!(std::abs(m - 1.0) <= kMeanTolerance))
      throw DomainError("periodic Poisson problem needs mean(rho) = 1, got mean " + std::to_string(m));
  }

  template <class ModeOp>
  void apply(std::span<const double> in, std::span<double> out, ModeOp op) {
    const int n = grid_.cells;
    if (in.size() != grid_.size() || out.size() != grid_.size())
      throw std::invalid_argument("field size does not match grid");
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    auto* c = reinterpret_cast<std::complex<double>*>(modes_);
    c[0] = 0.0;
    const double wavenumber = 2.0 * std::numbers::pi / grid_.length;
    for (int m = 1; m <= n / 2; ++m) {
      if (2 * m == n) {
        c[m] = 0.0;  // Nyquist mode has no well-defined odd derivative
        continue;
      }
      c[m] = op(c[m], wavenumber * m) / static_cast<double>(n);
    }
    fftw_execute(backward_);
    std::copy(real_, real_ + n, out.begin());
  }

  Grid1D grid_;
  double* real_ = nullptr;
  fftw_complex* modes_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// One-shot Poisson force for a density field.
[[nodiscard]] inline std::vector<double> poisson_force(std::span<const double> rho, const Grid1D& grid) {
  PeriodicSpectral ops(grid);
  std::vector<double> f(grid.size());
  ops.force(rho, f);
  return f;
}

[[nodiscard]] inline std::vector<double> poisson_potential(std::span<const double> rho, const Grid1D& grid) {
  PeriodicSpectral ops(grid);
  std::vector<double> phi(grid.size());
  ops.potential(rho, phi);
  return phi;
}

/// Second-order centred difference (u_{i+1} - u_{i-1}) / 2dx.
inline void centered_derivative(std::span<const double> v, const Grid1D& grid, std::span<double> out) {
  const int n = grid.cells;
  const double inv = 1.0 / (2.0 * grid.dx());
  for (int i = 0; i < n; ++i) out[i] = (v[(i + 1) % n] - v[(i + n - 1) % n]) * inv;
}

[[nodiscard]] inline std::vector<double> velocity_gradient(std::span<const double> u, const Grid1D& grid,
                                                           Derivative kind) {
  std::vector<double> ux(grid.size());
  if (kind == Derivative::Spectral) {
    PeriodicSpectral ops(grid);
    ops.derivative(u, ux);
  } else {
    centered_derivative(u, grid, ux);
  }
  return ux;
}

/// Time-stepper for one grid.  Holds the FFT plans and scratch buffers.
class Solver {
 public:
  explicit Solver(const Grid1D& grid, Scheme scheme = Scheme::FV1, double dt_max = 1e-2)
      : grid_(grid), scheme_(scheme), dt_max_(dt_max), spectral_(grid) {
    if (!(dt_max > 0.0)) throw DomainError("dt_max must be > 0");
    const std::size_t n = grid_.size();
    force_.resize(n);
    flux_.resize(n);
    slope_rho_.resize(n);
    slope_u_.resize(n);
  }

  [[nodiscard]] const Grid1D& grid() const { return grid_; }
  [[nodiscard]] PeriodicSpectral& spectral() { return spectral_; }

  /// Stable step size for the current state: the CFL limit on the advection
  /// speed plus a free-fall term for fluid at rest, capped at dt_max.
  [[nodiscard]] double stable_dt(const FieldState1D& s, double cfl) {
    spectral_.force(s.rho, force_);
    double umax = 0.0, fmax = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      umax = std::max(umax, std::abs(s.u[i]));
      fmax = std::max(fmax, std::abs(force_[i]));
    }
    const double dx = grid_.dx();
    const double speed = umax + std::sqrt(dx * fmax);
    return speed > 0.0 ? std::min(cfl * dx / speed, dt_max_) : dt_max_;
  }

  /// Advances by one step of size dt (use stable_dt to pick it).
  [[nodiscard]] FieldState1D advance(const FieldState1D& s, double dt) {
    FieldState1D out;
    if (scheme_ == Scheme::FV1) {
      out = euler_stage(s, dt, false);
    } else {
      const FieldState1D stage = euler_stage(s, dt, true);
      FieldState1D second = euler_stage(stage, dt, true);
      out.rho.resize(grid_.size());
      out.u.resize(grid_.size());
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        out.rho[i] = 0.5 * (s.rho[i] + second.rho[i]);
        out.u[i] = 0.5 * (s.u[i] + second.u[i]);
      }
    }
    out.t = s.t + dt;
    audit(s, out);
    return out;
  }

  [[nodiscard]] FieldState1D step(const FieldState1D& s, double cfl) {
    if (!(cfl > 0.0 && cfl <= 0.5)) throw DomainError("cfl must lie in (0, 0.5]");
    return advance(s, stable_dt(s, cfl));
  }

 private:
  static double van_leer(double a, double b) {
    return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0;
  }

  void limited_slopes(std::span<const double> v, std::span<double> slope) const {
    const int n = grid_.cells;
    for (int i = 0; i < n; ++i)
      slope[i] = van_leer(v[i] - v[(i + n - 1) % n], v[(i + 1) % n] - v[i]);
  }

  FieldState1D euler_stage(const FieldState1D& s, double dt, bool second_order) {
    const int n = grid_.cells;
    const double dx = grid_.dx();
    for (double r : s.rho)
      if (!(r >= 0.0) || !std::isfinite(r)) throw NumericalFailure("density became negative or non-finite");
    spectral_.force(s.rho, force_);
    if (second_order) {
      limited_slopes(s.rho, slope_rho_);
      limited_slopes(s.u, slope_u_);
    } else {
      std::fill(slope_rho_.begin(), slope_rho_.end(), 0.0);
      std::fill(slope_u_.begin(), slope_u_.end(), 0.0);
    }

    // Upwind mass flux through face i+1/2.
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      const double a = 0.5 * (s.u[i] + s.u[ip]);
      const double rho_face = a > 0.0 ? s.rho[i] + 0.5 * slope_rho_[i] : s.rho[ip] - 0.5 * slope_rho_[ip];
      flux_[i] = a * rho_face;
    }

    FieldState1D out;
    out.rho.resize(grid_.size());
    out.u.resize(grid_.size());
    const double lambda = dt / dx;
    for (int i = 0; i < n; ++i) {
      const int im = (i + n - 1) % n;
      const int ip = (i + 1) % n;
      out.rho[i] = s.rho[i] - lambda * (flux_[i] - flux_[im]);
      double ux;
      if (s.u[i] > 0.0) {
        ux = (s.u[i] + 0.5 * slope_u_[i]) - (s.u[im] + 0.5 * slope_u_[im]);
      } else {
        ux = (s.u[ip] - 0.5 * slope_u_[ip]) - (s.u[i] - 0.5 * slope_u_[i]);
      }
      out.u[i] = s.u[i] - lambda * s.u[i] * ux + dt * force_[i];
    }
    return out;
  }

  void audit(const FieldState1D& before, const FieldState1D& after) const {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!(after.rho[i] >= 0.0) || !std::isfinite(after.rho[i]) || !std::isfinite(after.u[i]))
        throw NumericalFailure("non-finite or negative state at t = " + std::to_string(after.t));
    }
    const double drift = std::abs(mean(after.rho) - mean(before.rho));
    if (drift > 1e-12) throw NumericalFailure("discrete mass drifted by " + std::to_string(drift));
  }

  Grid1D grid_;
  Scheme scheme_;
  double dt_max_;
  PeriodicSpectral spectral_;
  std::vector<double> force_, flux_, slope_rho_, slope_u_;
};

/// Advances a state by one step of size Solver::stable_dt.
[[nodiscard]] inline FieldState1D step(const FieldState1D& state, const Grid1D& grid, double cfl,
                                       Scheme scheme = Scheme::FV1) {
  Solver solver(grid, scheme);
  return solver.step(state, cfl);
}

struct RunControls {
  double cfl = 0.4;
  double max_time = 10.0;
  double rho_threshold = 1e2;
  double ux_threshold = -1e2;
  Scheme scheme = Scheme::FV1;
  Derivative deriv = Derivative::Spectral;
  double dt_max = 1e-2;
  /// Times at which to keep a copy of the fields (clipped to the run).
  std::vector<double> snapshot_times;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 0.5)) throw DomainError("cfl must lie in (0, 0.5]");
    if (!(max_time > 0.0)) throw DomainError("max_time must be > 0");
    if (!(rho_threshold > 1.0)) throw DomainError("rho_threshold must be > 1");
    if (!(ux_threshold < 0.0)) throw DomainError("ux_threshold must be < 0");
    if (!(dt_max > 0.0)) throw DomainError("dt_max must be > 0");
  }
};

enum class Outcome { BlowupDetected, RanToMaxTime, NumericalFailure };

[[nodiscard]] constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::BlowupDetected: return "BlowupDetected";
    case Outcome::RanToMaxTime: return "RanToMaxTime";
    case Outcome::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

struct HistoryPoint {
  double t;
  double value;
};

struct SimResult {
  Outcome outcome = Outcome::RanToMaxTime;
  std::optional<double> t_detect;
  std::vector<HistoryPoint> max_rho_history;
  std::vector<HistoryPoint> min_ux_history;
  FieldState1D final_state;
  std::vector<FieldState1D> snapshots;
  std::string failure_message;
  std::size_t steps = 0;
};

/// Steps until the density or velocity-gradient threshold is crossed, the
/// final time is reached, or the discrete state breaks down.
[[nodiscard]] inline SimResult run(const FieldState1D& initial, const Grid1D& grid, const RunControls& controls) {
  grid.validate();
  controls.validate();
  if (initial.rho.size() != grid.size() || initial.u.size() != grid.size())
    throw DomainError("initial fields do not match the grid");
  for (double r : initial.rho)
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("initial density must be finite and >= 0");
  if (!(std::abs(mean(initial.rho) - 1.0) <= kMeanTolerance))
    throw DomainError("initial density must have mean 1");

  Solver solver(grid, controls.scheme, controls.dt_max);
  std::vector<double> ux(grid.size());
  SimResult result;

  std::vector<double> pending = controls.snapshot_times;
  std::sort(pending.begin(), pending.end(), std::greater<>());

  auto record = [&](const FieldState1D& s) {
    if (controls.deriv == Derivative::Spectral)
      solver.spectral().derivative(s.u, ux);
    else
      centered_derivative(s.u, grid, ux);
    const double max_rho = *std::max_element(s.rho.begin(), s.rho.end());
    const double min_ux = *std::min_element(ux.begin(), ux.end());
    result.max_rho_history.push_back({s.t, max_rho});
    result.min_ux_history.push_back({s.t, min_ux});
    while (!pending.empty() && pending.back() <= s.t) {
      result.snapshots.push_back(s);
      pending.pop_back();
    }
    return max_rho >= controls.rho_threshold || min_ux <= controls.ux_threshold;
  };

  FieldState1D state = initial;
  if (record(state)) {
    result.outcome = Outcome::BlowupDetected;
    result.t_detect = state.t;
    result.final_state = std::move(state);
    return result;
  }
  try {
    while (state.t < controls.max_time) {
      double dt = solver.stable_dt(state, controls.cfl);
      if (state.t + dt > controls.max_time) dt = controls.max_time - state.t;
      FieldState1D next = solver.advance(state, dt);
      if (state.t + dt >= controls.max_time) next.t = controls.max_time;
      state = std::move(next);
      ++result.steps;
      if (record(state)) {
        result.outcome = Outcome::BlowupDetected;
        result.t_detect = state.t;
        result.final_state = std::move(state);
        return result;
      }
    }
    result.outcome = Outcome::RanToMaxTime;
  } catch (const NumericalFailure& e) {
    result.outcome = Outcome::NumericalFailure;
    result.failure_message = e.what();
  } catch (const DomainError& e) {
    result.outcome = Outcome::NumericalFailure;
    result.failure_message = e.what();
  }
  result.final_state = std::move(state);
  return result;
}

struct CellPrediction {
  double x;
  PhaseState initial;
  Classification classification;
  std::optional<double> t_ode;
};

struct Prediction {
  std::vector<CellPrediction> cells;
  std::optional<double> t_pred;
  /// Aggregate verdict: any sup-critical cell, else any boundary cell, else none.
  Verdict summary = Verdict::NoBlowupGuaranteed;
};

/// Classifies the initial (u_x, rho) of every cell with n = 1 and integrates
/// the majorant ODE from each sup-critical cell; t_pred is the earliest
/// blow-up time over cells.
[[nodiscard]] inline Prediction predict_blowup_from_initial(const FieldState1D& initial, const Grid1D& grid,
                                                            Derivative deriv = Derivative::Spectral,
                                                            const IntegratorControls& ode_controls = {}) {
  grid.validate();
  const Dimension one(1);
  const std::vector<double> ux = velocity_gradient(initial.u, grid, deriv);
  Prediction out;
  out.cells.reserve(grid.size());
  bool any_boundary = false;
  bool any_sup = false;
  for (int i = 0; i < grid.cells; ++i) {
    CellPrediction cell{grid.x(i), {ux[i], initial.rho[i]}, {}, std::nullopt};
    cell.classification = classify(cell.initial, one);
    if (is_sup_critical(cell.classification.verdict)) {
      any_sup = true;
      const Trajectory traj = integrate_majorant(cell.initial, one, ode_controls);
      if (traj.blew_up()) {
        cell.t_ode = traj.terminal_event()->t;
        if (!out.t_pred || *cell.t_ode < *out.t_pred) out.t_pred = cell.t_ode;
      }
    } else if (cell.classification.verdict == Verdict::Boundary) {
      any_boundary = true;
    }
    out.cells.push_back(cell);
  }
  if (any_sup) {
    out.summary = Verdict::SupCriticalOmega1;
    for (const auto& c : out.cells)
      if (c.t_ode && c.t_ode == out.t_pred) out.summary = c.classification.verdict;
  } else if (any_boundary) {
    out.summary = Verdict::Boundary;
  }
  return out;
}

}  // namespace eplab::ep1d
