#pragma once

// Phase-portrait data for the majorant system: separatrix branches,
// nullclines, critical points, the older one-sided region boundary
// d = -sqrt(n), trajectories from seeds, and a labelled verdict grid.

#include "eplab/io.hpp"
#include "eplab/phase_plane.hpp"
#include "eplab/threshold.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace eplab {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct SeparatrixRow {
  double rho, d_left, d_right;
};

/// d' = 0 on d^2 = n (1 - rho) (defined for rho <= 1); rho' = 0 on d = 0.
struct NullclineRow {
  double rho, d_minus, d_plus;
};

struct GridCell {
  double d, rho;
  Verdict verdict;
};

struct SeededTrajectory {
  int seed_id;
  Trajectory trajectory;
};

struct PortraitDataset {
  int n = 2;
  std::vector<SeparatrixRow> separatrix;
  std::vector<NullclineRow> nullclines;
  std::array<CriticalPoint, 3> points{};
  double legacy_d = 0.0;  // d = -sqrt(n), boundary of the one-sided region
  std::vector<SeededTrajectory> trajectories;
  std::vector<GridCell> grid;
};

[[nodiscard]] inline PortraitDataset emit_portrait(Dimension n, Interval rho_range, Interval d_range, int resolution,
                                                   const std::vector<PhaseState>& seeds,
                                                   const IntegratorControls& controls = {}) {
  if (resolution < 1) throw DomainError("portrait resolution must be positive");
  if (!(rho_range.lo >= 0.0 && rho_range.hi > rho_range.lo)) throw DomainError("invalid rho range");
  if (!(d_range.hi > d_range.lo)) throw DomainError("invalid d range");

  PortraitDataset ds;
  ds.n = n.value();
  ds.points = critical_points(n);
  ds.legacy_d = -std::sqrt(n.real());

  const double drho = (rho_range.hi - rho_range.lo) / resolution;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < resolution; ++i) {
    // Sampled on (lo, hi] so the vacuum state never appears.
    const double rho = rho_range.lo + (i + 1) * drho;
    const auto [left, right] = separatrix(rho, n);
    ds.separatrix.push_back({rho, left, right});
    const double q = n.real() * (1.0 - rho);
    ds.nullclines.push_back(q >= 0.0 ? NullclineRow{rho, -std::sqrt(q), std::sqrt(q)} : NullclineRow{rho, nan, nan});
  }

  const double dd = (d_range.hi - d_range.lo) / resolution;
  for (int i = 0; i < resolution; ++i) {
    const double rho = rho_range.lo + (i + 0.5) * drho;
    for (int j = 0; j < resolution; ++j) {
      const double d = d_range.lo + (j + 0.5) * dd;
      ds.grid.push_back({d, rho, classify({d, rho}, n).verdict});
    }
  }

  int id = 0;
  for (const PhaseState& seed : seeds) ds.trajectories.push_back({id++, integrate_majorant(seed, n, controls)});
  return ds;
}

[[nodiscard]] inline std::string separatrix_csv(const PortraitDataset& ds) {
  std::string s = "rho,d_left,d_right\n";
  for (const auto& r : ds.separatrix) s += io::num(r.rho) + ',' + io::num(r.d_left) + ',' + io::num(r.d_right) + '\n';
  return s;
}

[[nodiscard]] inline std::string nullclines_csv(const PortraitDataset& ds) {
  std::string s = "rho,d_minus,d_plus\n";
  for (const auto& r : ds.nullclines) s += io::num(r.rho) + ',' + io::num(r.d_minus) + ',' + io::num(r.d_plus) + '\n';
  return s;
}

[[nodiscard]] inline std::string trajectories_csv(const PortraitDataset& ds) {
  const Dimension n(ds.n);
  std::string s = "seed_id,t,d,rho,I\n";
  for (const auto& st : ds.trajectories)
    for (const auto& smp : st.trajectory.samples)
      s += std::to_string(st.seed_id) + ',' + io::num(smp.t) + ',' + io::num(smp.state.d) + ',' +
           io::num(smp.state.rho) + ',' + io::num(invariant_I(smp.state, n)) + '\n';
  return s;
}

[[nodiscard]] inline std::string grid_csv(const PortraitDataset& ds) {
  std::string s = "d,rho,verdict\n";
  for (const auto& c : ds.grid) s += io::num(c.d) + ',' + io::num(c.rho) + ',' + std::string(to_string(c.verdict)) + '\n';
  return s;
}

[[nodiscard]] inline std::string points_csv(const PortraitDataset& ds) {
  std::string s = "d,rho,kind\n";
  for (const auto& p : ds.points)
    s += io::num(p.location.d) + ',' + io::num(p.location.rho) + ',' + std::string(to_string(p.kind)) + '\n';
  return s;
}

/// Stages separatrix.csv, trajectories.csv, grid.csv, points.csv and nullclines.csv.
inline void stage_portrait(const PortraitDataset& ds, io::StagedOutputs& out) {
  out.add("separatrix.csv", separatrix_csv(ds));
  out.add("trajectories.csv", trajectories_csv(ds));
  out.add("grid.csv", grid_csv(ds));
  out.add("points.csv", points_csv(ds));
  out.add("nullclines.csv", nullclines_csv(ds));
}

}  // namespace eplab
