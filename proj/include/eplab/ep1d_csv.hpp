#pragma once

// CSV renderings of 1D simulation output.

#include "eplab/ep1d.hpp"
#include "eplab/io.hpp"

#include <string>

namespace eplab::ep1d {

/// sim_history.csv: t, max_rho, min_ux per recorded step.
[[nodiscard]] inline std::string history_csv(const SimResult& r) {
  std::string s = "t,max_rho,min_ux\n";
  for (std::size_t i = 0; i < r.max_rho_history.size(); ++i)
    s += io::num(r.max_rho_history[i].t) + ',' + io::num(r.max_rho_history[i].value) + ',' +
         io::num(r.min_ux_history[i].value) + '\n';
  return s;
}

/// fields_t*.csv: x, rho, u.
[[nodiscard]] inline std::string fields_csv(const FieldState1D& s, const Grid1D& grid) {
  std::string out = "x,rho,u\n";
  for (int i = 0; i < grid.cells; ++i) out += io::num(grid.x(i)) + ',' + io::num(s.rho[i]) + ',' + io::num(s.u[i]) + '\n';
  return out;
}

[[nodiscard]] inline std::string fields_filename(const FieldState1D& s) {
  return fmt::format("fields_t{:.6f}.csv", s.t);
}

/// prediction.csv: x, d0, rho0, verdict, t_ode (nan where no blow-up is predicted).
[[nodiscard]] inline std::string prediction_csv(const Prediction& p) {
  std::string s = "x,d0,rho0,verdict,t_ode\n";
  for (const auto& c : p.cells)
    s += io::num(c.x) + ',' + io::num(c.initial.d) + ',' + io::num(c.initial.rho) + ',' +
         std::string(to_string(c.classification.verdict)) + ',' +
         io::num(c.t_ode.value_or(std::numeric_limits<double>::quiet_NaN())) + '\n';
  return s;
}

}  // namespace eplab::ep1d
