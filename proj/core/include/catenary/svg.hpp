#pragma once

// Self-contained SVG plots: curves in the plane (with the unit circle drawn
// for reference) and phase portraits in the (r, r') plane.

#include <optional>
#include <string>
#include <vector>

#include "catenary/dynamics.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

struct PlotBox {
  double x_min, x_max, y_min, y_max;
};

/// Cartesian curves gamma(s) = r(s)(cos s, sin s). Points beyond `clip` times
/// the unit radius are dropped so that blow-up branches stay readable.
std::string cartesian_svg(const std::vector<Trajectory>& curves, double clip = 4.0);

/// Phase portrait of the trajectories, clipped to box; the equilibrium, when
/// present, is marked and the singular line r = 1 is dashed.
std::string phase_svg(const PowerParams& params, const std::vector<Trajectory>& curves, const PlotBox& box);

}  // namespace catenary
