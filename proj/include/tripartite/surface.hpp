#pragma once

// Purity surfaces over the (theta, phi) plane at fixed vphi.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "tripartite/document.hpp"
#include "tripartite/entanglement.hpp"
#include "tripartite/schmidt_core.hpp"

namespace tripartite {

struct Interval {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
};

struct SurfaceRequest {
  Bipartition bipartition = Bipartition::A_vs_BC;
  Excitation excitation{0, 0, 1};
  double fixed_vphi = 0.0;
  int grid_points = 101;
  Interval theta_range;
  Interval phi_range;

  void validate() const {
    if (grid_points < 2)
      throw std::invalid_argument("surface grid needs at least 2 points per axis");
    if (!(theta_range.hi > theta_range.lo) || !(phi_range.hi > phi_range.lo))
      throw std::invalid_argument("surface ranges must be non-degenerate");
  }
};

struct SurfaceGrid {
  struct Row {
    double theta;
    double phi;
    double purity;
  };

  int grid_points = 0;
  std::vector<Row> rows;  // theta-major
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  // Extremes polished off the lattice, inside the cells around the sampled
  // arg-min and arg-max. A lattice rarely passes through the exact extremum.
  Row refined_min{};
  Row refined_max{};

  const Row& at(int theta_index, int phi_index) const {
    return rows[static_cast<std::size_t>(theta_index) * grid_points + phi_index];
  }
};

inline double grid_coordinate(const Interval& r, int i, int points) {
  if (i == points - 1) return r.hi;
  return r.lo + (r.hi - r.lo) * static_cast<double>(i) / (points - 1);
}

inline double surface_purity(const SurfaceRequest& req, double theta, double phi) {
  const Angles a{theta, req.fixed_vphi, phi};
  return purity(mode_spectrum(coefficients_sum(req.excitation, mixing_matrix(a)),
                              req.bipartition));
}

namespace detail {

/// Alternating one-dimensional Brent searches over theta and phi, confined to
/// one lattice spacing around `start` and clipped to the requested ranges.
/// `sign` is +1 to minimize and -1 to maximize.
inline SurfaceGrid::Row polish_extremum(const SurfaceRequest& req, SurfaceGrid::Row start,
                                        double sign) {
  const double ht = (req.theta_range.hi - req.theta_range.lo) / (req.grid_points - 1);
  const double hp = (req.phi_range.hi - req.phi_range.lo) / (req.grid_points - 1);
  const double t_lo = std::max(req.theta_range.lo, start.theta - ht);
  const double t_hi = std::min(req.theta_range.hi, start.theta + ht);
  const double p_lo = std::max(req.phi_range.lo, start.phi - hp);
  const double p_hi = std::min(req.phi_range.hi, start.phi + hp);
  constexpr int bits = std::numeric_limits<double>::digits / 2 + 4;

  SurfaceGrid::Row best = start;
  for (int sweep = 0; sweep < 12; ++sweep) {
    const double before = best.purity;
    std::uintmax_t iters = 200;
    const auto t = boost::math::tools::brent_find_minima(
        [&](double x) { return sign * surface_purity(req, x, best.phi); }, t_lo, t_hi, bits,
        iters);
    if (sign * t.second < sign * best.purity) best = {t.first, best.phi, sign * t.second};
    iters = 200;
    const auto p = boost::math::tools::brent_find_minima(
        [&](double y) { return sign * surface_purity(req, best.theta, y); }, p_lo, p_hi, bits,
        iters);
    if (sign * p.second < sign * best.purity) best = {best.theta, p.first, sign * p.second};
    if (std::fabs(best.purity - before) <= 1e-16) break;
  }
  return best;
}

}  // namespace detail

inline SurfaceGrid compute_surface(const SurfaceRequest& req) {
  req.validate();
  SurfaceGrid grid;
  grid.grid_points = req.grid_points;
  grid.rows.reserve(static_cast<std::size_t>(req.grid_points) * req.grid_points);
  std::size_t arg_min = 0, arg_max = 0;
  for (int i = 0; i < req.grid_points; ++i) {
    const double theta = grid_coordinate(req.theta_range, i, req.grid_points);
    for (int j = 0; j < req.grid_points; ++j) {
      const double phi = grid_coordinate(req.phi_range, j, req.grid_points);
      const double p = surface_purity(req, theta, phi);
      if (p < grid.min) arg_min = grid.rows.size();
      if (p > grid.max) arg_max = grid.rows.size();
      grid.rows.push_back({theta, phi, p});
      grid.min = std::min(grid.min, p);
      grid.max = std::max(grid.max, p);
    }
  }
  grid.refined_min = detail::polish_extremum(req, grid.rows[arg_min], 1.0);
  grid.refined_max = detail::polish_extremum(req, grid.rows[arg_max], -1.0);
  return grid;
}

/// UTF-8, LF line endings, header row, theta-major.
inline void write_surface_csv(std::ostream& os, const SurfaceGrid& grid) {
  os << "theta,phi,purity\n";
  for (const auto& r : grid.rows)
    os << format_double(r.theta) << ',' << format_double(r.phi) << ','
       << format_double(r.purity) << '\n';
}

}  // namespace tripartite
