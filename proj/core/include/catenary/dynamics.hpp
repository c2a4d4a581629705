#pragma once

// The Euler-Lagrange equation as the planar system
//
//     u' = v
//     v' = u((a+1)u - 1)/(u - 1) + ((a+2)u - 2) v^2 / (u (u - 1))
//
// with (u, v) = (r, r'), its adaptive integration from r(0) = r0, r'(0) = 0,
// and the linearisation at the constant solution.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "catenary/model.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

struct PhasePoint {
  double u;
  double v;
};

struct PhaseVelocity {
  double du;
  double dv;
};

enum class EquilibriumKind { Center, Saddle };

struct EquilibriumInfo {
  PhasePoint point;
  std::array<std::array<double, 2>, 2> jacobian;
  std::array<std::complex<double>, 2> eigenvalues;
  EquilibriumKind kind;
};

/// r'' from the equation. Throws SingularStateError on r in {0, 1}.
double second_derivative(const PowerParams& params, double r, double dr);
double second_derivative(const PowerParams& params, Radius rad, double dr);

/// Right-hand side of the phase system; dv is second_derivative.
PhaseVelocity vector_field(const PowerParams& params, PhasePoint p);

/// Solve the initial value problem r(0) = r0, r'(0) = 0 on [-span, span] or
/// until an event fires. The s < 0 half is the mirror image of the s > 0
/// half unless config.two_sided is set.
Trajectory integrate(const PowerParams& params, double r0, const SolverConfig& config = {});

/// Constant solution and its linearisation; absent for alpha <= -1.
std::optional<EquilibriumInfo> equilibrium(const PowerParams& params);

/// True when the trajectory is the constant solution (r' identically zero).
bool is_stationary(const Trajectory& traj);

/// Angles strictly inside the sampled range where r' changes sign, refined
/// on the interpolant. Empty for a stationary trajectory.
std::vector<double> v_zero_crossings(const Trajectory& traj);

struct MidpointResidual {
  double max_relative = 0.0;  // max |el_residual| / el_scale over checked midpoints
  double worst_s = 0.0;
  std::size_t checked = 0;
  // Intervals too short for s to be represented to 1e-8 relative accuracy
  // (only occur in the last sliver before a singular endpoint).
  std::size_t unresolved = 0;
};

/// Euler-Lagrange residual of the interpolant at every interval midpoint.
MidpointResidual midpoint_el_residuals(const Trajectory& traj);

}  // namespace catenary
