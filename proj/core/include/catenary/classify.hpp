#pragma once

// Qualitative classification of the solution r(s) with r(0) = r0, r'(0) = 0.
//
// The expected regime follows from alpha and r0 alone:
//
//   alpha > 0       r0 < 1           PeriodicInner
//                   r0 = 1/(1+a)     ConstantCircle
//                   r0 > 1           OuterAsymptotic
//   -1 < alpha < 0  r0 < 1           OrthogonalHitConvex
//                   1 < r0 < 1/(1+a) OrthogonalHitConcave
//                   r0 = 1/(1+a)     ConstantCircle
//                   r0 > 1/(1+a)     OuterUnboundedConvex
//   alpha <= -1     r0 < 1           OrthogonalHitConvex
//                   r0 > 1           OrthogonalHitConcave
//
// classify() integrates, measures and only reports a regime when the
// measurement agrees with the table and its supporting metric clears its
// tolerance by the confidence factor. Rays through the origin are also
// extremals but are not radial graphs, so they never appear here.

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "catenary/model.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

enum class Regime {
  ConstantCircle,
  PeriodicInner,
  OuterAsymptotic,
  OrthogonalHitConvex,
  OrthogonalHitConcave,
  OuterUnboundedConvex,
  Unresolved,
};

std::string_view to_string(Regime regime) noexcept;
std::optional<Regime> regime_from_string(std::string_view name) noexcept;

/// Regime predicted by the table above.
Regime predicted_regime(const PowerParams& params, double r0);

struct ClassifyConfig {
  SolverConfig solver;
  // Periodic runs double the span until five critical points are seen.
  double max_span = 64.0 * std::numbers::pi;
  // Return to (r0, 0) after one period, relative to r0.
  double closure_tol = 1e-6;
  // |cos phi| at the unit circle.
  double orthogonality_tol = 1e-3;
  // A metric must beat its tolerance by this factor.
  double confidence = 10.0;
};

struct ClassificationReport {
  PowerParams params{1.0};
  double r0 = 0.0;
  Regime regime = Regime::Unresolved;
  std::optional<double> period;
  std::optional<std::pair<double, double>> extrema;  // (min r, max r) over the sampled range
  std::optional<double> blowup_angle;
  std::optional<double> orthogonality_defect;
  double angular_extent = 0.0;      // s_max - s_min reached
  double conservation_drift = 0.0;  // momentum_drift
  StopReason stop_reason = StopReason::Completed;
  SolverConfig solver;
  std::string notes;
};

ClassificationReport classify(const PowerParams& params, double r0, const ClassifyConfig& config = {});

/// Full period from the critical points: the mean of c[i+2] - c[i].
/// Throws std::invalid_argument with fewer than four critical points besides s = 0.
double period(const Trajectory& traj);

/// sup |r(s + T) - r(s)| over the sampled overlap.
double periodicity_defect(const Trajectory& traj, double T);

struct SwapDefect {
  double defect = 0.0;           // sup over one period of |r(s + delta; r0) - r(s; 1 - r0)|
  double other_extremum = 0.0;   // r(delta; r0), expected 1 - r0
  double delta = 0.0;            // first positive critical point of r(.; r0)
};

/// alpha = 1, 0 < r0 < 1: the solution started at 1 - r0 is the one started
/// at r0 shifted to its next critical point (half a period).
SwapDefect half_period_swap_defect(double r0, const SolverConfig& solver = {});

/// For a run stopped at the unit circle: the larger of |cos phi| at the last
/// sample and its extrapolation to r = 1 from the final samples.
/// Throws std::invalid_argument for any other stop reason.
double orthogonality_defect(const Trajectory& traj);

/// alpha = -2: sup |r(s; r0) r(s; 1/r0) - 1| over the common domain.
double inversion_defect(double r0, const SolverConfig& solver = {});

/// Blow-up angle s1 of a run stopped by Blowup.
/// Throws std::invalid_argument for any other stop reason.
double asymptote_angle(const Trajectory& traj);

/// alpha = 1, small r0: Hausdorff distance between the curve over one period
/// centred at s = 0 and the segment {0} x [-1, 1].
double segment_hausdorff_distance(double r0, const SolverConfig& solver = {});

}  // namespace catenary
