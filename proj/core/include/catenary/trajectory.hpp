#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "catenary/model.hpp"

namespace catenary {

/// Why an integration ended. Exactly one per trajectory.
enum class StopReason {
  Completed,      // requested span reached
  SingularUnit,   // |r - 1| < eps_unit
  NearOrigin,     // r < eps_origin
  Blowup,         // |r'| > v_max
  StepUnderflow,  // step collapsed before an event resolved
};

std::string_view to_string(StopReason reason) noexcept;
std::optional<StopReason> stop_reason_from_string(std::string_view name) noexcept;

struct SolverConfig {
  double span = 4.0 * std::numbers::pi;  // integrate over [-span, span]
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double eps_unit = 1e-9;
  double eps_origin = 1e-9;
  double v_max = 1e9;
  std::size_t max_samples = 2'000'000;

  // Sample spacing: at most max_ds, and at most sample_fraction of the local
  // time scale of the phase state.
  double max_ds = 1e-2;
  double sample_fraction = 2e-2;

  // End-game: once |r - 1| < endgame_gap or |r'| > endgame_speed (moving
  // into a barrier), integrate with log|r - 1| or -log r as the independent
  // variable. endgame_dt caps the log-step scaled by the local power law.
  double endgame_gap = 1e-2;
  double endgame_speed = 1e3;
  double endgame_dt = 5e-3;

  // Integrate the s < 0 half independently instead of reflecting.
  bool two_sided = false;
};

/// Interpolated local jet of a trajectory.
struct Jet {
  double s;
  Radius radius;
  double dr;
  double ddr;
};

/// A sampled solution r(s) with r(0) = r0, r'(0) = 0 on s in [s_min, s_max].
struct Trajectory {
  PowerParams params;
  double r0;
  std::vector<Sample> samples;
  StopReason stop_reason = StopReason::Completed;
  SolverConfig tolerances;
  // Extrapolated end of the maximal domain on the s > 0 side, when the
  // integration stopped at a singular event.
  std::optional<double> limit_s;

  double s_min() const { return samples.front().s; }
  double s_max() const { return samples.back().s; }

  /// Index i with samples[i].s <= s <= samples[i+1].s (clamped to the ends).
  std::size_t interval(double s) const;

  /// Cubic Hermite interpolation of (r - 1, r') between neighbouring samples,
  /// using r' and r'' from the equation as node derivatives. ddr is the
  /// derivative of the interpolated r'.
  Jet interpolate(double s) const;
};

struct TrajectoryEnergy {
  double value;
  double s_lo;  // integration range actually used
  double s_hi;
  bool truncated;
};

/// Energy of a trajectory over its sampled range. Samples closer to the unit
/// circle than min_gap are dropped (the integrand diverges there for
/// alpha <= -1), and the truncation angles are reported.
TrajectoryEnergy trajectory_energy(const Trajectory& traj, double min_gap = 1e-4);

}  // namespace catenary
