#pragma once

// First variation of the energy, measured directly: perturb r at fixed angle
// by a compactly supported bump and difference the quadrature.

#include <cstddef>
#include <functional>
#include <vector>

#include "catenary/model.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

/// `count` disjoint cos^2 windows tiling the support [s_lo, s_hi]. Each mode
/// and its derivative vanish at the ends of its window, so every mode also
/// vanishes at the ends of the domain.
class BumpBasis {
 public:
  BumpBasis(std::size_t count, double domain_lo, double domain_hi, double s_lo, double s_hi);

  /// Support is the middle `fraction` of [domain_lo, domain_hi].
  static BumpBasis centred(double domain_lo, double domain_hi, std::size_t count = 8, double fraction = 0.8);

  std::size_t count() const noexcept { return count_; }
  double domain_lo() const noexcept { return domain_lo_; }
  double domain_hi() const noexcept { return domain_hi_; }
  double support_lo() const noexcept { return s_lo_; }
  double support_hi() const noexcept { return s_hi_; }

  /// Window [lo, hi] of mode k.
  std::pair<double, double> window(std::size_t k) const;
  double value(std::size_t k, double s) const;
  double derivative(std::size_t k, double s) const;

 private:
  std::size_t count_;
  double domain_lo_, domain_hi_, s_lo_, s_hi_;
};

struct CurvePoint {
  Radius radius;
  double dr;
};

/// A radial graph given pointwise, r(s) and r'(s).
using CurveFn = std::function<CurvePoint(double s)>;

/// max_k |E[r + h phi_k] - E[r - h phi_k]| / (2 h E[r]), E over the basis
/// domain. Perturbed slopes are r' + h phi_k'. Throws SingularStateError if
/// a perturbation reaches r = 0 or crosses r = 1.
double stationarity_defect(const PowerParams& params, const CurveFn& curve, const BumpBasis& basis, double h);
double stationarity_defect(const PowerParams& params, const Trajectory& traj, const BumpBasis& basis, double h);

/// 1e-4 times the radial range of the trajectory over the domain (1e-5 r
/// for a constant curve).
double default_step(const Trajectory& traj, double domain_lo, double domain_hi);

struct ConvergenceFit {
  std::vector<double> steps;
  std::vector<double> defects;
  double order = 0.0;  // least-squares slope of log defect against log h
};

/// Defects at each step and the observed order over the given steps.
ConvergenceFit defect_convergence(const PowerParams& params, const Trajectory& traj, const BumpBasis& basis,
                                  const std::vector<double>& steps);

}  // namespace catenary
