#include "catenary/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace catenary {

PowerParams::PowerParams(double alpha) : alpha_(alpha) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite");
  }
  if (alpha == 0.0) {
    throw std::invalid_argument("alpha = 0 is the length functional; its extremals are straight lines");
  }
}

std::optional<double> PowerParams::equilibrium_radius() const noexcept {
  if (alpha_ > -1.0) {
    return 1.0 / (1.0 + alpha_);
  }
  return std::nullopt;
}

bool PowerParams::is_integer() const noexcept { return std::nearbyint(alpha_) == alpha_; }

void require_regular(Radius rad, const char* where) {
  if (!(rad.r > 0.0) || rad.gap == 0.0 || !std::isfinite(rad.r)) {
    throw SingularStateError(std::string(where) + ": r must be positive and different from 1 (got " +
                             std::to_string(rad.r) + ")");
  }
}

double curvature(double r, double dr, double ddr) {
  const double q = r * r + dr * dr;
  return (2.0 * dr * dr + r * r - r * ddr) / (q * std::sqrt(q));
}

double cos_phi(double r, double dr) {
  if (std::isinf(dr)) {
    return -0.0;
  }
  return -r / std::hypot(r, dr);
}

double distance_power(const PowerParams& params, Radius rad) {
  return std::pow(std::abs(rad.gap), params.alpha());
}

double el_residual(const PowerParams& params, double r, double dr, double ddr) {
  return el_residual(params, Radius::from_r(r), dr, ddr);
}

double el_residual(const PowerParams& params, Radius rad, double dr, double ddr) {
  require_regular(rad, "el_residual");
  const double a = params.alpha();
  const double r = rad.r;
  // (a+2)r - 2 = a r + 2(r-1),  (a+1)r - 1 = a r + (r-1)
  return r * rad.gap * ddr - (a * r + 2.0 * rad.gap) * dr * dr - (a * r + rad.gap) * r * r;
}

double el_scale(const PowerParams& params, Radius rad, double dr, double ddr) {
  const double a = std::abs(params.alpha());
  const double r = rad.r;
  const double g = std::abs(rad.gap);
  return r * g * std::abs(ddr) + (a * r + 2.0 * g) * dr * dr + (a * r + g) * r * r;
}

double curvature_relation_residual(const PowerParams& params, double r, double dr, double ddr) {
  return curvature_relation_residual(params, Radius::from_r(r), dr, ddr);
}

double curvature_relation_residual(const PowerParams& params, Radius rad, double dr, double ddr) {
  require_regular(rad, "curvature_relation_residual");
  return curvature(rad.r, dr, ddr) - params.alpha() * cos_phi(rad.r, dr) / rad.gap;
}

double energy_density(const PowerParams& params, const Sample& sample) {
  return distance_power(params, sample.radius()) * std::hypot(sample.r, sample.dr);
}

double energy(const PowerParams& params, std::span<const Sample> curve) {
  const std::size_t n = curve.size();
  if (n < 2) {
    return 0.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(curve[i].s > curve[i - 1].s)) {
      throw std::invalid_argument("energy: s-grid must be strictly increasing");
    }
  }
  for (const auto& smp : curve) {
    if (!(smp.r > 0.0)) {
      throw SingularStateError("energy: r must be positive on every sample");
    }
  }

  auto f = [&](std::size_t i) { return energy_density(params, curve[i]); };

  if (n == 2) {
    return 0.5 * (curve[1].s - curve[0].s) * (f(0) + f(1));
  }

  double total = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    const double h0 = curve[i + 1].s - curve[i].s;
    const double h1 = curve[i + 2].s - curve[i + 1].s;
    const double hs = h0 + h1;
    total += hs / 6.0 *
             ((2.0 - h1 / h0) * f(i) + hs * hs / (h0 * h1) * f(i + 1) + (2.0 - h0 / h1) * f(i + 2));
  }
  if (i + 1 < n) {
    // odd number of intervals: quadratic through the last three samples,
    // integrated over the final interval only
    const double h0 = curve[i].s - curve[i - 1].s;
    const double h1 = curve[i + 1].s - curve[i].s;
    total += h1 * (f(i + 1) * (2.0 * h1 + 3.0 * h0) / (6.0 * (h0 + h1)) +
                   f(i) * (h1 + 3.0 * h0) / (6.0 * h0) - f(i - 1) * h1 * h1 / (6.0 * h0 * (h0 + h1)));
  }
  return total;
}

std::vector<CartesianPoint> to_cartesian(std::span<const Sample> curve) {
  std::vector<CartesianPoint> out;
  out.reserve(curve.size());
  for (const auto& smp : curve) {
    out.push_back({smp.r * std::cos(smp.s), smp.r * std::sin(smp.s)});
  }
  return out;
}

}  // namespace catenary
