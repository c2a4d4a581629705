#include "catenary/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "catenary/dynamics.hpp"

namespace catenary {

namespace {
constexpr std::array<std::pair<StopReason, std::string_view>, 5> kStopNames{{
    {StopReason::Completed, "Completed"},
    {StopReason::SingularUnit, "SingularUnit"},
    {StopReason::NearOrigin, "NearOrigin"},
    {StopReason::Blowup, "Blowup"},
    {StopReason::StepUnderflow, "StepUnderflow"},
}};
}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  for (const auto& [r, name] : kStopNames) {
    if (r == reason) {
      return name;
    }
  }
  return "Unknown";
}

std::optional<StopReason> stop_reason_from_string(std::string_view name) noexcept {
  for (const auto& [r, n] : kStopNames) {
    if (n == name) {
      return r;
    }
  }
  return std::nullopt;
}

std::size_t Trajectory::interval(double s) const {
  if (samples.size() < 2) {
    throw std::logic_error("trajectory has fewer than two samples");
  }
  auto it = std::upper_bound(samples.begin(), samples.end(), s,
                             [](double value, const Sample& smp) { return value < smp.s; });
  std::size_t idx = it == samples.begin() ? 0 : static_cast<std::size_t>(it - samples.begin()) - 1;
  return std::min(idx, samples.size() - 2);
}

Jet Trajectory::interpolate(double s) const {
  const std::size_t i = interval(s);
  const Sample& a = samples[i];
  const Sample& b = samples[i + 1];
  const double h = b.s - a.s;
  const double t = (s - a.s) / h;

  const double fa = second_derivative(params, a.radius(), a.dr);
  const double fb = second_derivative(params, b.radius(), b.dr);

  // cubic Hermite basis and derivatives (w.r.t. t)
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;

  const double gap = h00 * a.gap + h10 * h * a.dr + h01 * b.gap + h11 * h * b.dr;
  const double dr = h00 * a.dr + h10 * h * fa + h01 * b.dr + h11 * h * fb;
  const double ddr = (d00 * a.dr + d01 * b.dr) / h + d10 * fa + d11 * fb;
  return Jet{s, Radius::from_gap(gap), dr, ddr};
}

TrajectoryEnergy trajectory_energy(const Trajectory& traj, double min_gap) {
  std::vector<Sample> kept;
  kept.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) {
    if (std::abs(smp.gap) >= min_gap) {
      kept.push_back(smp);
    }
  }
  if (kept.size() < 2) {
    throw std::invalid_argument("trajectory_energy: no samples outside the truncation band");
  }
  const bool truncated = kept.size() != traj.samples.size();
  return {energy(traj.params, kept), kept.front().s, kept.back().s, truncated};
}

}  // namespace catenary
