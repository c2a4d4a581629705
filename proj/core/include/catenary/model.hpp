#pragma once

// Pointwise geometry of radial graphs r(s) and the weighted-length energy
//
//     E_alpha[r] = integral |r - 1|^alpha sqrt(r^2 + r'^2) ds
//
// measured against the unit circle. The independent variable s is the polar
// angle, so a curve is gamma(s) = r(s) (cos s, sin s).

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace catenary {

/// Thrown when a state touches the singular set r = 0 or r = 1.
class SingularStateError : public std::domain_error {
 public:
  explicit SingularStateError(const std::string& what) : std::domain_error(what) {}
};

/// The energy exponent alpha. alpha = 0 (plain length) is rejected.
class PowerParams {
 public:
  explicit PowerParams(double alpha);

  double alpha() const noexcept { return alpha_; }

  /// Radius 1/(1+alpha) of the constant solution; present iff alpha > -1.
  std::optional<double> equilibrium_radius() const noexcept;

  /// True when alpha is (numerically) an integer.
  bool is_integer() const noexcept;

  friend bool operator==(const PowerParams&, const PowerParams&) = default;

 private:
  double alpha_;
};

/// A radius together with its signed offset from the unit circle. The
/// offset is carried separately because near r = 1 it cannot be recovered
/// from r to full relative precision.
struct Radius {
  double r;
  double gap;  // r - 1

  static Radius from_r(double r) noexcept { return {r, r - 1.0}; }
  static Radius from_gap(double gap) noexcept { return {1.0 + gap, gap}; }
};

struct PolarState {
  double r;
  double dr;
};

/// One sample of a radial graph: angle, radius, dr/ds and the offset r - 1.
struct Sample {
  double s;
  double r;
  double dr;
  double gap;

  static Sample make(double s, double r, double dr) noexcept { return {s, r, dr, r - 1.0}; }
  static Sample make(double s, Radius rad, double dr) noexcept { return {s, rad.r, dr, rad.gap}; }

  Radius radius() const noexcept { return {r, gap}; }
};

struct CartesianPoint {
  double x;
  double y;
};

/// Throws SingularStateError unless r > 0 and r != 1.
void require_regular(Radius rad, const char* where);

/// Signed curvature of r(s)(cos s, sin s) w.r.t. the normal obtained by
/// rotating the unit tangent by +90 degrees.
double curvature(double r, double dr, double ddr);

/// Cosine of the angle between that normal and the position vector;
/// equals -r / sqrt(r^2 + r'^2).
double cos_phi(double r, double dr);

/// |r - 1|^alpha, branch fixed by the sign of the gap.
double distance_power(const PowerParams& params, Radius rad);

/// LHS - RHS of  r(r-1) r'' = ((a+2) r - 2) r'^2 + ((a+1) r - 1) r^2.
double el_residual(const PowerParams& params, double r, double dr, double ddr);
double el_residual(const PowerParams& params, Radius rad, double dr, double ddr);

/// Sum of magnitudes of the monomials making up el_residual; the natural
/// scale against which a residual is judged.
double el_scale(const PowerParams& params, Radius rad, double dr, double ddr);

/// kappa - alpha cos(phi) / (r - 1).
double curvature_relation_residual(const PowerParams& params, double r, double dr, double ddr);
double curvature_relation_residual(const PowerParams& params, Radius rad, double dr, double ddr);

/// Energy integrand |r-1|^alpha sqrt(r^2 + r'^2) at one sample.
double energy_density(const PowerParams& params, const Sample& sample);

/// Composite Simpson quadrature of the energy over a strictly increasing
/// s-grid (non-uniform spacing allowed; an odd trailing interval is closed
/// with the three-point rule on the last two intervals).
double energy(const PowerParams& params, std::span<const Sample> curve);

/// gamma(s) = r(s)(cos s, sin s), pointwise.
std::vector<CartesianPoint> to_cartesian(std::span<const Sample> curve);

}  // namespace catenary
