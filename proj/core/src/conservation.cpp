#include "catenary/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace catenary {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr int kMaxAbsAlpha = 25;

cpp_rational ipow(const cpp_rational& x, int n) {
  cpp_rational base = n < 0 ? cpp_rational(1) / x : x;
  cpp_rational out = 1;
  for (int k = std::abs(n); k > 0; --k) {
    out *= base;
  }
  return out;
}

// Coefficients (ascending) of 2((a+1) r - 1) (r-1)^(2k-1), a = -k.
std::vector<cpp_int> gg_numerator(int alpha) {
  const int k = -alpha;
  const int m = 2 * k - 1;
  std::vector<cpp_int> binom(static_cast<std::size_t>(m) + 1);
  cpp_int c = 1;
  for (int j = 0; j <= m; ++j) {
    // (r-1)^m = sum_j C(m, j) r^j (-1)^(m-j)
    binom[static_cast<std::size_t>(j)] = ((m - j) % 2 == 0) ? c : cpp_int(-c);
    c = c * (m - j) / (j + 1);
  }
  std::vector<cpp_int> out(static_cast<std::size_t>(m) + 2, 0);
  for (int j = 0; j <= m; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    out[ju] += -2 * binom[ju];                 // 2 * (-1) * r^j term
    out[ju + 1] += 2 * (alpha + 1) * binom[ju];  // 2 (a+1) r * r^j term
  }
  return out;
}

double horner(const std::vector<std::int64_t>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + static_cast<double>(*it);
  }
  return acc;
}

void require_integer_alpha(int alpha) {
  if (alpha == 0 || std::abs(alpha) > kMaxAbsAlpha) {
    throw std::invalid_argument("first integral: alpha must be a nonzero integer with |alpha| <= 25");
  }
}

}  // namespace

double momentum(const PowerParams& params, double r, double dr) {
  return momentum(params, Radius::from_r(r), dr);
}

double momentum(const PowerParams& params, Radius rad, double dr) {
  require_regular(rad, "momentum");
  return rad.r * rad.r * distance_power(params, rad) / std::hypot(rad.r, dr);
}

double momentum_drift(const Trajectory& traj) {
  const double j0 = momentum(traj.params, Radius::from_r(traj.r0), 0.0);
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    worst = std::max(worst, std::abs(momentum(traj.params, smp.radius(), smp.dr) - j0) / std::abs(j0));
  }
  return worst;
}

std::vector<std::int64_t> g_polynomial(int alpha) {
  if (alpha >= 0 || alpha < -kMaxAbsAlpha) {
    throw std::invalid_argument("g_polynomial: alpha must be a negative integer >= -25");
  }
  const std::vector<cpp_int> n = gg_numerator(alpha);
  // g' = sum_j n_j r^(j-3); j = 0, 1 give -1/r^2 and -2a/r, j = 2 would be a log
  if (n[2] != 0) {
    throw std::logic_error("g_polynomial: unexpected logarithmic term");
  }
  std::vector<std::int64_t> p(n.size() >= 3 ? n.size() - 2 : 1, 0);
  for (std::size_t j = 3; j < n.size(); ++j) {
    const cpp_int d = static_cast<int>(j) - 2;
    if (n[j] % d != 0) {
      throw std::logic_error("g_polynomial: non-integer coefficient");
    }
    p[j - 2] = static_cast<std::int64_t>(n[j] / d);
  }
  return p;
}

FirstIntegralForm::FirstIntegralForm(int alpha) : alpha_(alpha) {
  require_integer_alpha(alpha);
  if (alpha < 0) {
    p_ = g_polynomial(alpha);
  }
}

double FirstIntegralForm::f(Radius rad) const {
  return std::pow(rad.r, 4) * std::pow(std::abs(rad.gap), 2 * alpha_);
}

double FirstIntegralForm::g_tail(Radius rad) const {
  const double r = rad.r;
  if (alpha_ > 0) {
    return -1.0 / (r * r * std::pow(std::abs(rad.gap), 2 * alpha_));
  }
  return -1.0 / (r * r) - 2.0 * alpha_ / r + horner(p_, r);
}

double FirstIntegralForm::g_tail_magnitude(Radius rad) const {
  const double r = rad.r;
  if (alpha_ > 0) {
    return std::abs(g_tail(rad));
  }
  double poly = 0.0;
  for (auto it = p_.rbegin(); it != p_.rend(); ++it) {
    poly = poly * r + std::abs(static_cast<double>(*it));
  }
  return 1.0 / (r * r) + 2.0 * std::abs(alpha_) / r + poly;
}

double FirstIntegralForm::g_tail_derivative(Radius rad) const {
  const double r = rad.r;
  if (alpha_ > 0) {
    const double g2a = std::pow(std::abs(rad.gap), 2 * alpha_);
    return 2.0 / (r * r * r * g2a) + 2.0 * alpha_ / (r * r * g2a * rad.gap);
  }
  double dp = 0.0;
  for (std::size_t j = p_.size(); j-- > 1;) {
    dp = dp * r + static_cast<double>(j) * static_cast<double>(p_[j]);
  }
  return 2.0 / (r * r * r) + 2.0 * alpha_ / (r * r) + dp;
}

double FirstIntegralForm::constant(double r0) const {
  return -g_tail(Radius::from_r(r0));
}

double g_prime(int alpha, Radius rad) {
  const double r = rad.r;
  return 2.0 * ((alpha + 1.0) * r - 1.0) / (r * r * r * std::pow(rad.gap, 2 * alpha + 1));
}

bool g_derivative_matches_exactly(const FirstIntegralForm& form, std::int64_t num, std::int64_t den) {
  if (den == 0 || num == 0 || num == den) {
    throw std::invalid_argument("g_derivative_matches_exactly: point must avoid 0 and 1");
  }
  const int a = form.alpha();
  const cpp_rational x = cpp_rational(cpp_int(num)) / cpp_rational(cpp_int(den));
  const cpp_rational gap = x - 1;

  cpp_rational represented;
  if (a > 0) {
    represented = 2 * ipow(x, -3) * ipow(gap, -2 * a) + 2 * a * ipow(x, -2) * ipow(gap, -2 * a - 1);
  } else {
    represented = 2 * ipow(x, -3) + 2 * a * ipow(x, -2);
    const auto& p = form.p_coefficients();
    for (std::size_t j = 1; j < p.size(); ++j) {
      represented += cpp_rational(static_cast<long long>(j) * p[j]) * ipow(x, static_cast<int>(j) - 1);
    }
  }
  const cpp_rational expected = 2 * ((a + 1) * x - 1) * ipow(x, -3) * ipow(gap, -2 * a - 1);
  return represented == expected;
}

double first_integral_residual(const FirstIntegralForm& form, double r0, double r, double dr) {
  return first_integral_residual(form, r0, Radius::from_r(r), dr);
}

double first_integral_residual(const FirstIntegralForm& form, double r0, Radius rad, double dr) {
  require_regular(rad, "first_integral_residual");
  require_regular(Radius::from_r(r0), "first_integral_residual");
  const double c = form.constant(r0);
  const double fv = form.f(rad);
  const double lhs = dr * dr;
  const double rhs = fv * (c + form.g_tail(rad));
  const double scale = lhs + std::abs(fv) * (std::abs(c) + form.g_tail_magnitude(rad));
  return scale > 0.0 ? (lhs - rhs) / scale : 0.0;
}

double first_integral_drift(const FirstIntegralForm& form, const Trajectory& traj) {
  if (static_cast<double>(form.alpha()) != traj.params.alpha()) {
    throw std::invalid_argument("first_integral_drift: exponent mismatch");
  }
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    worst = std::max(worst, std::abs(first_integral_residual(form, traj.r0, smp.radius(), smp.dr)));
  }
  return worst;
}

DomainBound domain_bound_quadrature(int alpha, double r0, double r_max) {
  if (alpha < 1) {
    throw std::invalid_argument("domain_bound_quadrature: alpha must be a positive integer");
  }
  if (!(r0 > 1.0) || !std::isfinite(r0)) {
    throw std::invalid_argument("domain_bound_quadrature: r0 must exceed 1");
  }
  if (!(r_max > r0)) {
    throw std::invalid_argument("domain_bound_quadrature: r_max must exceed r0");
  }
  using boost::math::quadrature::gauss_kronrod;
  const double a = alpha;
  const double big_k = r0 * std::pow(r0 - 1.0, a);  // r0 (r0-1)^a
  constexpr double tol = 1e-14;
  constexpr unsigned depth = 20;

  // Near r0: r = r0 + t^2. The difference r^2 (r-1)^2a - K^2 = (A - B)(A + B)
  // with A - B = B expm1(log(A/B)) to avoid cancellation.
  const double r_mid = std::min(r_max, 2.0 * r0);
  auto near = [&](double t) {
    const double t2 = t * t;
    const double r = r0 + t2;
    if (t2 == 0.0) {
      const double dd = 2.0 * r0 * std::pow(r0 - 1.0, 2 * a) + 2.0 * a * r0 * r0 * std::pow(r0 - 1.0, 2 * a - 1);
      return 2.0 / (r0 * std::sqrt(dd));
    }
    const double log_ratio = std::log1p(t2 / r0) + a * std::log1p(t2 / (r0 - 1.0));
    const double diff = big_k * std::expm1(log_ratio);
    const double sum = r * std::pow(r - 1.0, a) + big_k;
    return 2.0 * t / (r * std::sqrt(diff * sum));
  };
  double integral = gauss_kronrod<double, 31>::integrate(near, 0.0, std::sqrt(r_mid - r0), depth, tol);

  // Far field: x = 1/r, integrand x^a / sqrt((1-x)^2a - K^2 x^(2+2a)).
  auto far = [&](double x) {
    return std::pow(x, a) / std::sqrt(std::pow(1.0 - x, 2 * a) - big_k * big_k * std::pow(x, 2 + 2 * a));
  };
  if (r_max > r_mid) {
    integral += gauss_kronrod<double, 31>::integrate(far, 1.0 / r_max, 1.0 / r_mid, depth, tol);
  }

  DomainBound out{};
  out.s_at_rmax = big_k * integral;
  out.tail = big_k * std::pow(r_max, -(1.0 + a)) / (1.0 + a);
  out.s1 = out.s_at_rmax + out.tail;
  return out;
}

}  // namespace catenary
