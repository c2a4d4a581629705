#include "catenary/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace catenary {

namespace {

// Quadrature intervals per window and over the domain.
constexpr int kWindowIntervals = 800;
constexpr int kDomainIntervals = 4000;

std::vector<Sample> resample(const CurveFn& curve, double lo, double hi, int intervals,
                             const std::function<CurvePoint(double, CurvePoint)>& perturb) {
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double s = i == intervals ? hi : lo + (hi - lo) * i / intervals;
    const CurvePoint p = perturb(s, curve(s));
    out.push_back(Sample::make(s, p.radius, p.dr));
  }
  return out;
}

CurvePoint identity(double, CurvePoint p) { return p; }

}  // namespace

BumpBasis::BumpBasis(std::size_t count, double domain_lo, double domain_hi, double s_lo, double s_hi)
    : count_(count), domain_lo_(domain_lo), domain_hi_(domain_hi), s_lo_(s_lo), s_hi_(s_hi) {
  if (count == 0) {
    throw std::invalid_argument("BumpBasis: need at least one mode");
  }
  if (!(domain_lo < domain_hi) || !(domain_lo < s_lo) || !(s_lo < s_hi) || !(s_hi < domain_hi)) {
    throw std::invalid_argument("BumpBasis: support must lie strictly inside the domain");
  }
}

BumpBasis BumpBasis::centred(double domain_lo, double domain_hi, std::size_t count, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("BumpBasis: fraction must lie in (0, 1)");
  }
  const double mid = 0.5 * (domain_lo + domain_hi);
  const double half = 0.5 * fraction * (domain_hi - domain_lo);
  return BumpBasis(count, domain_lo, domain_hi, mid - half, mid + half);
}

std::pair<double, double> BumpBasis::window(std::size_t k) const {
  if (k >= count_) {
    throw std::out_of_range("BumpBasis: mode index out of range");
  }
  const double w = (s_hi_ - s_lo_) / static_cast<double>(count_);
  return {s_lo_ + w * static_cast<double>(k), s_lo_ + w * static_cast<double>(k + 1)};
}

double BumpBasis::value(std::size_t k, double s) const {
  const auto [lo, hi] = window(k);
  if (s <= lo || s >= hi) return 0.0;
  const double c = std::cos(std::numbers::pi * (s - 0.5 * (lo + hi)) / (hi - lo));
  return c * c;
}

double BumpBasis::derivative(std::size_t k, double s) const {
  const auto [lo, hi] = window(k);
  if (s <= lo || s >= hi) return 0.0;
  const double w = hi - lo;
  return -std::numbers::pi / w * std::sin(2.0 * std::numbers::pi * (s - 0.5 * (lo + hi)) / w);
}

double stationarity_defect(const PowerParams& params, const CurveFn& curve, const BumpBasis& basis, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("stationarity_defect: step must be positive");
  }
  const auto base = resample(curve, basis.domain_lo(), basis.domain_hi(), kDomainIntervals, identity);
  const double e0 = energy(params, base);
  if (!(e0 > 0.0)) {
    throw std::invalid_argument("stationarity_defect: curve has zero energy");
  }

  double worst = 0.0;
  for (std::size_t k = 0; k < basis.count(); ++k) {
    const auto [lo, hi] = basis.window(k);
    // the perturbed curves agree outside the window, so only it contributes
    auto shifted = [&](double sign) {
      return [&, sign](double s, CurvePoint p) {
        const double d = sign * h * basis.value(k, s);
        CurvePoint q{{p.radius.r + d, p.radius.gap + d}, p.dr + sign * h * basis.derivative(k, s)};
        if (!(q.radius.r > 0.0) || q.radius.gap * p.radius.gap <= 0.0) {
          throw SingularStateError("stationarity_defect: perturbation reaches a singular radius");
        }
        return q;
      };
    };
    const double plus = energy(params, resample(curve, lo, hi, kWindowIntervals, shifted(1.0)));
    const double minus = energy(params, resample(curve, lo, hi, kWindowIntervals, shifted(-1.0)));
    worst = std::max(worst, std::abs(plus - minus) / (2.0 * h));
  }
  return worst / e0;
}

double stationarity_defect(const PowerParams& params, const Trajectory& traj, const BumpBasis& basis, double h) {
  if (basis.domain_lo() < traj.s_min() || basis.domain_hi() > traj.s_max()) {
    throw std::invalid_argument("stationarity_defect: basis domain exceeds the trajectory");
  }
  const CurveFn curve = [&traj](double s) {
    const Jet j = traj.interpolate(s);
    return CurvePoint{j.radius, j.dr};
  };
  return stationarity_defect(params, curve, basis, h);
}

double default_step(const Trajectory& traj, double domain_lo, double domain_hi) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& smp : traj.samples) {
    if (smp.s < domain_lo || smp.s > domain_hi) continue;
    lo = std::min(lo, smp.r);
    hi = std::max(hi, smp.r);
  }
  if (!(hi >= lo)) {
    throw std::invalid_argument("default_step: no samples in the domain");
  }
  // a constant curve has no radial range; fall back to a fixed fraction of r
  return hi > lo ? 1e-4 * (hi - lo) : 1e-5 * hi;
}

ConvergenceFit defect_convergence(const PowerParams& params, const Trajectory& traj, const BumpBasis& basis,
                                  const std::vector<double>& steps) {
  if (steps.size() < 2) {
    throw std::invalid_argument("defect_convergence: need at least two steps");
  }
  ConvergenceFit fit;
  fit.steps = steps;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double h : steps) {
    const double d = stationarity_defect(params, traj, basis, h);
    fit.defects.push_back(d);
    const double x = std::log(h), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(steps.size());
  fit.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace catenary
