#include "catenary/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "catenary/conservation.hpp"
#include "catenary/dynamics.hpp"

namespace catenary {

namespace {

constexpr std::array<std::pair<Regime, std::string_view>, 7> kRegimeNames{{
    {Regime::ConstantCircle, "ConstantCircle"},
    {Regime::PeriodicInner, "PeriodicInner"},
    {Regime::OuterAsymptotic, "OuterAsymptotic"},
    {Regime::OrthogonalHitConvex, "OrthogonalHitConvex"},
    {Regime::OrthogonalHitConcave, "OrthogonalHitConcave"},
    {Regime::OuterUnboundedConvex, "OuterUnboundedConvex"},
    {Regime::Unresolved, "Unresolved"},
}};

void require_initial_radius(double r0, const char* where) {
  if (!std::isfinite(r0)) {
    throw std::invalid_argument(std::string(where) + ": r0 must be finite");
  }
  require_regular(Radius::from_r(r0), where);
}

enum class Sign { Positive, Negative, Mixed };

Sign convexity(const Trajectory& traj) {
  bool pos = true, neg = true;
  for (const auto& smp : traj.samples) {
    const double ddr = second_derivative(traj.params, smp.radius(), smp.dr);
    pos = pos && ddr > 0.0;
    neg = neg && ddr < 0.0;
  }
  return pos ? Sign::Positive : neg ? Sign::Negative : Sign::Mixed;
}

// Number of critical points other than s = 0.
std::size_t off_centre_crossings(const std::vector<double>& crossings) {
  return static_cast<std::size_t>(std::count_if(crossings.begin(), crossings.end(),
                                                [](double c) { return c != 0.0; }));
}

struct Measured {
  Regime regime = Regime::Unresolved;
  std::optional<double> period;
  std::optional<double> blowup_angle;
  std::optional<double> orthogonality;
  std::string notes;
};

Measured measure(const Trajectory& traj, const ClassifyConfig& cfg) {
  Measured m;
  const double alpha = traj.params.alpha();
  if (is_stationary(traj)) {
    m.regime = Regime::ConstantCircle;
    return m;
  }
  const auto crossings = v_zero_crossings(traj);
  const std::size_t extra = off_centre_crossings(crossings);
  const Sign sign = convexity(traj);
  std::ostringstream notes;

  switch (traj.stop_reason) {
    case StopReason::Completed: {
      if (extra >= 4) {
        const double T = period(traj);
        if (T > traj.s_max()) {
          notes << "period exceeds the sampled range; ";
          break;
        }
        const Jet back = traj.interpolate(T);
        const double closure = std::hypot(back.radius.r - traj.r0, back.dr) / traj.r0;
        const auto req = traj.params.equilibrium_radius();
        double lo = traj.samples.front().r, hi = lo;
        for (const auto& smp : traj.samples) {
          lo = std::min(lo, smp.r);
          hi = std::max(hi, smp.r);
        }
        if (closure > cfg.closure_tol / cfg.confidence) {
          notes << "phase closure " << closure << " above confidence threshold; ";
        } else if (!req || !(lo < *req && *req < hi)) {
          notes << "extrema do not bracket the constant solution; ";
        } else {
          m.regime = Regime::PeriodicInner;
          m.period = T;
        }
      } else if (extra == 0 && sign == Sign::Positive && traj.r0 > 1.0) {
        m.regime = Regime::OuterUnboundedConvex;
        notes << "span reached before blow-up; ";
      } else {
        notes << "span reached with " << extra << " off-centre critical points; ";
      }
      break;
    }
    case StopReason::Blowup: {
      if (extra != 0 || sign != Sign::Positive) {
        notes << "blow-up without a convex single-minimum profile; ";
        break;
      }
      if (alpha > 0.0) {
        if (!traj.limit_s) {
          notes << "blow-up angle not resolved; ";
          break;
        }
        m.regime = Regime::OuterAsymptotic;
        m.blowup_angle = *traj.limit_s;
      } else {
        m.regime = Regime::OuterUnboundedConvex;
      }
      break;
    }
    case StopReason::SingularUnit: {
      const double orth = orthogonality_defect(traj);
      m.orthogonality = orth;
      if (orth > cfg.orthogonality_tol / cfg.confidence) {
        notes << "orthogonality defect " << orth << " above confidence threshold; ";
      } else if (extra != 0) {
        notes << "unexpected critical points before reaching the unit circle; ";
      } else if (sign == Sign::Positive) {
        m.regime = Regime::OrthogonalHitConvex;
      } else if (sign == Sign::Negative) {
        m.regime = Regime::OrthogonalHitConcave;
      } else {
        notes << "r'' changes sign; ";
      }
      break;
    }
    case StopReason::NearOrigin:
      notes << "solution approached the origin; ";
      break;
    case StopReason::StepUnderflow:
      notes << "step size underflow; ";
      break;
  }
  m.notes = notes.str();
  return m;
}

}  // namespace

std::string_view to_string(Regime regime) noexcept {
  for (const auto& [r, name] : kRegimeNames) {
    if (r == regime) return name;
  }
  return "Unresolved";
}

std::optional<Regime> regime_from_string(std::string_view name) noexcept {
  for (const auto& [r, n] : kRegimeNames) {
    if (n == name) return r;
  }
  return std::nullopt;
}

Regime predicted_regime(const PowerParams& params, double r0) {
  require_initial_radius(r0, "predicted_regime");
  const double a = params.alpha();
  const auto req = params.equilibrium_radius();
  if (req && r0 == *req) {
    return Regime::ConstantCircle;
  }
  if (a > 0.0) {
    return r0 < 1.0 ? Regime::PeriodicInner : Regime::OuterAsymptotic;
  }
  if (r0 < 1.0) {
    return Regime::OrthogonalHitConvex;
  }
  if (a > -1.0 && r0 > *req) {
    return Regime::OuterUnboundedConvex;
  }
  return Regime::OrthogonalHitConcave;
}

ClassificationReport classify(const PowerParams& params, double r0, const ClassifyConfig& config) {
  const Regime expected = predicted_regime(params, r0);
  ClassificationReport report;
  report.params = params;
  report.r0 = r0;
  report.solver = config.solver;

  std::optional<Trajectory> traj;
  try {
    SolverConfig sc = config.solver;
    traj = integrate(params, r0, sc);
    if (expected == Regime::PeriodicInner) {
      while (traj->stop_reason == StopReason::Completed &&
             off_centre_crossings(v_zero_crossings(*traj)) < 5 && 2.0 * sc.span <= config.max_span) {
        sc.span *= 2.0;
        traj = integrate(params, r0, sc);
      }
    }
    report.solver = sc;
  } catch (const std::exception& e) {
    report.regime = Regime::Unresolved;
    report.notes = std::string("integration failed: ") + e.what();
    return report;
  }

  report.stop_reason = traj->stop_reason;
  report.angular_extent = traj->s_max() - traj->s_min();
  report.conservation_drift = momentum_drift(*traj);
  // sampled range, sharpened by the interpolated values at critical points
  double lo = traj->samples.front().r, hi = lo;
  for (const auto& smp : traj->samples) {
    lo = std::min(lo, smp.r);
    hi = std::max(hi, smp.r);
  }
  try {
    for (double c : v_zero_crossings(*traj)) {
      const double r = traj->interpolate(c).radius.r;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  } catch (const std::exception&) {
    // root refinement failure leaves the sampled range
  }
  report.extrema = std::make_pair(lo, hi);

  Measured m;
  try {
    m = measure(*traj, config);
  } catch (const std::exception& e) {
    m.regime = Regime::Unresolved;
    m.notes = std::string("measurement failed: ") + e.what() + "; ";
  }

  std::string notes = m.notes;
  if (m.regime == expected) {
    report.regime = m.regime;
    report.period = m.period;
    report.blowup_angle = m.blowup_angle;
    if (m.regime == Regime::OrthogonalHitConvex || m.regime == Regime::OrthogonalHitConcave) {
      report.orthogonality_defect = m.orthogonality;
    }
  } else {
    report.regime = Regime::Unresolved;
    notes += "expected " + std::string(to_string(expected)) + ", measured " +
             std::string(to_string(m.regime)) + "; ";
  }
  if (report.blowup_angle && !params.is_integer()) {
    notes += *report.blowup_angle < std::numbers::pi / 2 ? "s1 < pi/2 observed for non-integer alpha; "
                                                          : "s1 >= pi/2 for non-integer alpha; ";
  }
  if (report.angular_extent > 2.0 * std::numbers::pi && report.regime != Regime::PeriodicInner &&
      report.regime != Regime::ConstantCircle) {
    notes += "curve winds around the origin (angular extent > 2 pi); ";
  }
  if (!notes.empty() && notes.size() >= 2) {
    notes.resize(notes.size() - 2);
  }
  report.notes = notes;
  return report;
}

double period(const Trajectory& traj) {
  const auto c = v_zero_crossings(traj);
  if (off_centre_crossings(c) < 4) {
    throw std::invalid_argument("period: fewer than four critical points besides s = 0");
  }
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + 2 < c.size(); ++i) {
    sum += c[i + 2] - c[i];
    ++n;
  }
  return sum / static_cast<double>(n);
}

double periodicity_defect(const Trajectory& traj, double T) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("periodicity_defect: period must be positive");
  }
  double worst = 0.0;
  for (const auto& smp : traj.samples) {
    if (smp.s + T > traj.s_max()) break;
    worst = std::max(worst, std::abs(traj.interpolate(smp.s + T).radius.gap - smp.gap));
  }
  return worst;
}

SwapDefect half_period_swap_defect(double r0, const SolverConfig& solver) {
  if (!(r0 > 0.0 && r0 < 1.0)) {
    throw std::invalid_argument("half_period_swap_defect: need 0 < r0 < 1");
  }
  const PowerParams params(1.0);
  SwapDefect out;
  if (r0 == 0.5) {
    out.other_extremum = 0.5;
    return out;
  }
  SolverConfig sc = solver;
  Trajectory a = integrate(params, r0, sc);
  auto positive_crossings = [](const Trajectory& t) {
    std::vector<double> pos;
    for (double c : v_zero_crossings(t)) {
      if (c > 0.0) pos.push_back(c);
    }
    return pos;
  };
  auto ca = positive_crossings(a);
  while (ca.size() < 3 && a.stop_reason == StopReason::Completed && sc.span < 1e3) {
    sc.span *= 2.0;
    a = integrate(params, r0, sc);
    ca = positive_crossings(a);
  }
  if (ca.size() < 3) {
    throw std::invalid_argument("half_period_swap_defect: solution is not periodic");
  }
  const Trajectory b = integrate(params, 1.0 - r0, sc);
  out.delta = ca.front();
  const double T = ca[1];  // two critical-point gaps
  out.other_extremum = a.interpolate(out.delta).radius.r;

  constexpr int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double s = -0.5 * T + T * k / n;
    if (s + out.delta > a.s_max() || s < b.s_min() || s > b.s_max()) {
      throw std::logic_error("half_period_swap_defect: period not covered");
    }
    const double d = a.interpolate(s + out.delta).radius.gap - b.interpolate(s).radius.gap;
    out.defect = std::max(out.defect, std::abs(d));
  }
  return out;
}

double orthogonality_defect(const Trajectory& traj) {
  if (traj.stop_reason != StopReason::SingularUnit) {
    throw std::invalid_argument("orthogonality_defect: trajectory did not stop at the unit circle");
  }
  const auto& smp = traj.samples;
  if (smp.size() < 3) {
    throw std::invalid_argument("orthogonality_defect: too few samples");
  }
  const Sample& p1 = smp[smp.size() - 1];
  const Sample& p0 = smp[smp.size() - 2];
  const double c1 = std::abs(cos_phi(p1.r, p1.dr));
  const double c0 = std::abs(cos_phi(p0.r, p0.dr));
  // cos phi ~ r / |r'| and r' ~ |r - 1|^alpha, so cos phi ~ L + A |r - 1|^q
  // with q = -alpha. Eliminate A between the last two samples.
  const double q = -traj.params.alpha();
  const double w1 = std::pow(std::abs(p1.gap), q);
  const double w0 = std::pow(std::abs(p0.gap), q);
  double limit = c1;
  if (w0 != w1) {
    limit = (c1 * w0 - c0 * w1) / (w0 - w1);
  }
  return std::max(c1, std::abs(limit));
}

double inversion_defect(double r0, const SolverConfig& solver) {
  if (!std::isfinite(r0)) {
    throw std::invalid_argument("inversion_defect: r0 must be finite");
  }
  require_regular(Radius::from_r(r0), "inversion_defect");
  const PowerParams params(-2.0);
  const Trajectory a = integrate(params, r0, solver);
  const Trajectory b = integrate(params, 1.0 / r0, solver);
  const double s_end = std::min(a.s_max(), b.s_max());
  double worst = 0.0;
  for (const auto& smp : a.samples) {
    if (smp.s < 0.0) continue;
    if (smp.s > s_end) break;
    // skip the last sliver where neighbouring angles are not resolvable
    const std::size_t i = b.interval(smp.s);
    const double ds = b.samples[i + 1].s - b.samples[i].s;
    if (ds < 1e-8 * std::max(1.0, std::abs(smp.s))) continue;
    const double g2 = b.interpolate(smp.s).radius.gap;
    // r1 r2 - 1 written in the offsets
    worst = std::max(worst, std::abs(smp.gap + g2 + smp.gap * g2));
  }
  return worst;
}

double asymptote_angle(const Trajectory& traj) {
  if (traj.stop_reason != StopReason::Blowup || !traj.limit_s) {
    throw std::invalid_argument("asymptote_angle: trajectory did not blow up");
  }
  return *traj.limit_s;
}

double segment_hausdorff_distance(double r0, const SolverConfig& solver) {
  if (!(r0 > 0.0 && r0 < 0.5)) {
    throw std::invalid_argument("segment_hausdorff_distance: need 0 < r0 < 1/2");
  }
  const PowerParams params(1.0);
  const Trajectory traj = integrate(params, r0, solver);
  double half = 0.0;
  for (double c : v_zero_crossings(traj)) {
    if (c > 0.0) {
      half = c;
      break;
    }
  }
  if (half == 0.0) {
    throw std::invalid_argument("segment_hausdorff_distance: no critical point in span");
  }
  // densify to a Cartesian spacing well below the distances being measured
  constexpr double spacing = 1e-4;
  std::vector<CartesianPoint> curve;
  for (std::size_t i = traj.interval(-half); i + 1 < traj.samples.size(); ++i) {
    const Sample& p0 = traj.samples[i];
    const Sample& p1 = traj.samples[i + 1];
    const double s0 = std::max(p0.s, -half);
    const double s1 = std::min(p1.s, half);
    if (s0 >= half) break;
    const double speed = std::max(std::hypot(p0.r, p0.dr), std::hypot(p1.r, p1.dr));
    const auto n = static_cast<int>(std::clamp(std::ceil(2.0 * (s1 - s0) * speed / spacing), 1.0, 1e5));
    for (int k = 0; k <= n; ++k) {
      const double s = s0 + (s1 - s0) * k / n;
      const double r = traj.interpolate(s).radius.r;
      curve.push_back({r * std::cos(s), r * std::sin(s)});
    }
  }
  double curve_to_segment = 0.0;
  for (const auto& p : curve) {
    const double dy = std::max(0.0, std::abs(p.y) - 1.0);
    curve_to_segment = std::max(curve_to_segment, std::hypot(p.x, dy));
  }
  // nearest curve point for points of the segment, scanning outward in y
  std::sort(curve.begin(), curve.end(), [](const auto& a, const auto& b) { return a.y < b.y; });
  double segment_to_curve = 0.0;
  constexpr int m = 2000;
  for (int k = 0; k <= m; ++k) {
    const double y = -1.0 + 2.0 * k / m;
    const auto mid = std::lower_bound(curve.begin(), curve.end(), y,
                                      [](const CartesianPoint& p, double v) { return p.y < v; });
    double best = std::numeric_limits<double>::infinity();
    for (auto it = mid; it != curve.end() && it->y - y < best; ++it) {
      best = std::min(best, std::hypot(it->x, it->y - y));
    }
    for (auto it = mid; it != curve.begin();) {
      --it;
      if (y - it->y >= best) break;
      best = std::min(best, std::hypot(it->x, it->y - y));
    }
    segment_to_curve = std::max(segment_to_curve, best);
  }
  return std::max(curve_to_segment, segment_to_curve);
}

}  // namespace catenary
