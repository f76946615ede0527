#pragma once

// Parameterised initial data for the 1D solver.  Densities are sampled at
// cell centres and divided by their discrete mean, so mean(rho) = 1 holds to
// round-off.

#include "eplab/ep1d.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace eplab::ep1d {

enum class Family { Uniform, DensityCosine, VelocitySine, Balanced, ConstantVelocity };

[[nodiscard]] constexpr std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::DensityCosine: return "density_cosine";
    case Family::VelocitySine: return "velocity_sine";
    case Family::Balanced: return "balanced";
    case Family::ConstantVelocity: return "constant_velocity";
  }
  return "?";
}

[[nodiscard]] inline Family family_from_string(std::string_view name) {
  for (Family f : {Family::Uniform, Family::DensityCosine, Family::VelocitySine, Family::Balanced,
                   Family::ConstantVelocity})
    if (to_string(f) == name) return f;
  throw DomainError("unknown initial-data family '" + std::string(name) + "'");
}

namespace detail {

inline void normalize_mean(std::vector<double>& rho) {
  const double m = mean(rho);
  for (double& r : rho) r /= m;
}

}  // namespace detail

/// rho = 1, u = 0.
[[nodiscard]] inline FieldState1D uniform_state(const Grid1D& grid) {
  return {std::vector<double>(grid.size(), 1.0), std::vector<double>(grid.size(), 0.0), 0.0};
}

/// rho = 1 + b cos(2 pi m x / L), u = 0, with 0 <= b < 1.
[[nodiscard]] inline FieldState1D density_cosine(const Grid1D& grid, double amplitude, int mode = 1) {
  if (!(amplitude >= 0.0 && amplitude < 1.0)) throw DomainError("density amplitude must lie in [0, 1)");
  if (mode < 1) throw DomainError("mode must be >= 1");
  FieldState1D s = uniform_state(grid);
  const double k = 2.0 * std::numbers::pi * mode / grid.length;
  for (int i = 0; i < grid.cells; ++i) s.rho[i] = 1.0 + amplitude * std::cos(k * grid.x(i));
  detail::normalize_mean(s.rho);
  return s;
}

/// rho = 1, u = -a sin(2 pi m x / L); min u_x = -a k at x = 0.
[[nodiscard]] inline FieldState1D velocity_sine(const Grid1D& grid, double amplitude, int mode = 1) {
  if (mode < 1) throw DomainError("mode must be >= 1");
  FieldState1D s = uniform_state(grid);
  const double k = 2.0 * std::numbers::pi * mode / grid.length;
  for (int i = 0; i < grid.cells; ++i) s.u[i] = -amplitude * std::sin(k * grid.x(i));
  return s;
}

/// Density bump with u_x = rho - 1 pointwise: every cell sits on the critical curve.
[[nodiscard]] inline FieldState1D balanced_state(const Grid1D& grid, double amplitude, int mode = 1) {
  FieldState1D s = density_cosine(grid, amplitude, mode);
  const double k = 2.0 * std::numbers::pi * mode / grid.length;
  const double scale = amplitude / k;
  for (int i = 0; i < grid.cells; ++i) s.u[i] = scale * std::sin(k * grid.x(i));
  return s;
}

/// rho = 1, u = U.
[[nodiscard]] inline FieldState1D constant_velocity(const Grid1D& grid, double velocity) {
  FieldState1D s = uniform_state(grid);
  std::fill(s.u.begin(), s.u.end(), velocity);
  return s;
}

[[nodiscard]] inline FieldState1D make_initial(Family family, const Grid1D& grid, double amplitude, int mode = 1) {
  grid.validate();
  switch (family) {
    case Family::Uniform: return uniform_state(grid);
    case Family::DensityCosine: return density_cosine(grid, amplitude, mode);
    case Family::VelocitySine: return velocity_sine(grid, amplitude, mode);
    case Family::Balanced: return balanced_state(grid, amplitude, mode);
    case Family::ConstantVelocity: return constant_velocity(grid, amplitude);
  }
  throw DomainError("unknown family");
}

}  // namespace eplab::ep1d
