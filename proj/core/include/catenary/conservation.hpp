#pragma once

// Conserved quantities of the Euler-Lagrange flow.
//
// The Lagrangian |r-1|^a sqrt(r^2 theta'^2 + r'^2) does not depend on theta,
// so J = r^2 |r-1|^a / sqrt(r^2 + r'^2) is constant along every extremal.
// For integer a the reduced equation for p = r'^2 as a function of r is
// linear and splits as p = f(r) g(r), f = r^4 (r-1)^(2a), with
//
//     g'(r) = 2((a+1) r - 1) / (r^3 (r-1)^(2a+1)).

#include <cstdint>
#include <vector>

#include "catenary/model.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

double momentum(const PowerParams& params, double r, double dr);
double momentum(const PowerParams& params, Radius rad, double dr);

/// max over samples of |J(s) - J(0)| / |J(0)|.
double momentum_drift(const Trajectory& traj);

/// Coefficients of P(r), ascending from degree 0, in
///     g(r) = c - 1/r^2 - 2a/r + P(r)      (a a negative integer).
/// P has zero constant term and degree -2a - 2 (P = 0 for a = -1).
std::vector<std::int64_t> g_polynomial(int alpha);

/// p = r'^2 = f(r) g(r) for integer alpha.
class FirstIntegralForm {
 public:
  explicit FirstIntegralForm(int alpha);

  int alpha() const noexcept { return alpha_; }

  /// P(r) coefficients (negative alpha); empty for positive alpha.
  const std::vector<std::int64_t>& p_coefficients() const noexcept { return p_; }

  /// f(r) = r^4 (r-1)^(2 alpha).
  double f(Radius rad) const;

  /// The closed-form part of g:  -1/(r^2 (r-1)^(2a))  for a > 0,
  /// -1/r^2 - 2a/r + P(r)  for a < 0.
  double g_tail(Radius rad) const;

  /// Sum of magnitudes of the terms of g_tail (conditioning scale).
  double g_tail_magnitude(Radius rad) const;

  /// Derivative of g_tail, from the represented closed form.
  double g_tail_derivative(Radius rad) const;

  /// Integration constant c fixed by r(0) = r0, r'(0) = 0.
  double constant(double r0) const;

 private:
  int alpha_;
  std::vector<std::int64_t> p_;
};

/// Right-hand side of g'(r) = 2((a+1) r - 1) / (r^3 (r-1)^(2a+1)).
double g_prime(int alpha, Radius rad);

/// Exact check at the rational point num/den: the derivative of the
/// represented g equals the right-hand side of the g' equation.
bool g_derivative_matches_exactly(const FirstIntegralForm& form, std::int64_t num, std::int64_t den);

/// (r'^2 - f g) normalised by r'^2 + |f| (|c| + |g_tail terms|). For a > 0
/// this is the identity r'^2 r0^2 (r0-1)^(2a) = r^2 (r^2 (r-1)^(2a) - r0^2 (r0-1)^(2a)).
double first_integral_residual(const FirstIntegralForm& form, double r0, double r, double dr);
double first_integral_residual(const FirstIntegralForm& form, double r0, Radius rad, double dr);

/// max |first_integral_residual| over the samples of a trajectory.
double first_integral_drift(const FirstIntegralForm& form, const Trajectory& traj);

struct DomainBound {
  double s_at_rmax;  // angle at which r(s) = r_max
  double tail;       // asymptotic remainder beyond r_max
  double s1;         // estimate of the blow-up angle: s_at_rmax + tail
};

/// For a positive integer alpha and r0 > 1, the angle at which the solution
/// reaches r_max,
///     s(r_max) = r0 (r0-1)^a  int_{r0}^{r_max} dr / (r sqrt(r^2 (r-1)^(2a) - r0^2 (r0-1)^(2a))),
/// plus the r^-(2+a) tail beyond r_max. The endpoint singularity at r0 is
/// removed by r = r0 + t^2.
DomainBound domain_bound_quadrature(int alpha, double r0, double r_max = 1e6);

}  // namespace catenary
