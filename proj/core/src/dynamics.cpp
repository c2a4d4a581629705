#include "catenary/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "catenary/dopri5.hpp"

namespace catenary {

namespace {

using Vec2 = ode::Vec<2>;

// Unchecked r''. gap = r - 1.
double acceleration(double alpha, double r, double gap, double dr) {
  return ((alpha * r + 2.0 * gap) * dr * dr + (alpha * r + gap) * r * r) / (r * gap);
}

enum class Event { None, Origin, UnitSwitch, UnitHard, InfinitySwitch, VMax };

struct HalfResult {
  std::vector<Sample> samples;  // in order of travel, first at s = 0
  StopReason stop = StopReason::Completed;
  std::optional<double> limit_s;
};

// Integrates one half (direction +1 or -1) of the symmetric problem.
//
// Phase 1 uses s as the independent variable. Moving into the unit circle
// (alpha < 0) the solution reaches r = 1 with r' -> infinity at finite s;
// moving outward (alpha > -1) r and r' blow up at finite s. In both cases
// the tail is handed to an end-game with a logarithmic independent variable
// in which the solution is smooth up to the singular point:
//
//   unit:     t = log|r - 1|,  state (s, n),  r' = |r - 1|^alpha n
//   infinity: t = -log r,      state (s, m),  r' = r^(2 + alpha) / m
class HalfIntegrator {
 public:
  HalfIntegrator(const PowerParams& params, const SolverConfig& cfg, double direction)
      : alpha_(params.alpha()), cfg_(cfg), dir_(direction) {}

  HalfResult run(double r0) {
    push(Sample::make(0.0, Radius::from_r(r0), 0.0));
    run_s_phase(r0);
    return std::move(result_);
  }

 private:
  void push(const Sample& smp, bool force = false) {
    auto& out = result_.samples;
    if (out.empty() || dir_ * (smp.s - out.back().s) > 0.0) {
      if (out.size() >= cfg_.max_samples) {
        throw std::runtime_error("integrate: sample budget (max_samples) exhausted");
      }
      out.push_back(smp);
    } else if (force && out.size() > 1) {
      // s no longer resolvable in double precision; keep the newer state
      const double s = out.back().s;
      out.back() = smp;
      out.back().s = s;
    }
  }

  // End-games use a log variable, so the requested span can be reached
  // inside them. s is monotone there; locate s = span on the segment, record
  // it and report true.
  template <class SampleAt>
  bool clip_to_span(const ode::DenseSegment<2>& seg, const Vec2& y1, SampleAt&& sample_at) {
    const double target = dir_ * cfg_.span;
    if (dir_ * (y1[0] - target) < 0.0) {
      return false;
    }
    double lo = seg.t0, hi = seg.t1();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (dir_ * (seg(mid)[0] - target) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    Sample smp = sample_at(hi, seg(hi));
    smp.s = target;
    push(smp, true);
    return true;
  }

  double time_scale(double gap, double v) const {
    const double u = 1.0 + gap;
    const double f = acceleration(alpha_, u, gap, v);
    double tau = std::numeric_limits<double>::infinity();
    if (f != 0.0) tau = std::min(tau, (std::abs(v) + u) / std::abs(f));
    if (v != 0.0) tau = std::min({tau, u / std::abs(v), std::abs(gap) / std::abs(v)});
    return tau;
  }

  Event check(double gap, double v) const {
    if (!(1.0 + gap > cfg_.eps_origin)) return Event::Origin;
    const bool approaching_unit = dir_ * v * (-gap) > 0.0;
    if (alpha_ < 0.0 && approaching_unit &&
        (std::abs(gap) < cfg_.endgame_gap || std::abs(v) > cfg_.endgame_speed)) {
      return Event::UnitSwitch;
    }
    if (std::abs(gap) < cfg_.eps_unit) return Event::UnitHard;
    if (alpha_ > -1.0 && gap > 0.0 && dir_ * v > 0.0 && std::abs(v) > cfg_.endgame_speed) {
      return Event::InfinitySwitch;
    }
    if (!(std::abs(v) <= cfg_.v_max)) return Event::VMax;
    return Event::None;
  }

  void run_s_phase(double r0) {
    auto rhs = [a = alpha_](double, const Vec2& y) -> Vec2 {
      return {y[1], acceleration(a, 1.0 + y[0], y[0], y[1])};
    };
    ode::StepControl ctl{cfg_.rel_tol, cfg_.abs_tol, 0.25};

    Event event = Event::None;
    double s_event = 0.0;
    Vec2 y_event{};

    auto on_step = [&](const ode::DenseSegment<2>& seg, const Vec2& y1) {
      const Vec2 y0 = seg.c[0];
      const double h = seg.h;
      const double target =
          std::min(cfg_.max_ds, cfg_.sample_fraction * std::min(time_scale(y0[0], y0[1]),
                                                                 time_scale(y1[0], y1[1])));
      const auto n = static_cast<std::size_t>(
          std::clamp(std::ceil(std::abs(h) / target), 2.0, 1e6));
      double s_prev = seg.t0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double s = k == n ? seg.t1() : seg.t0 + h * static_cast<double>(k) / static_cast<double>(n);
        const Vec2 y = k == n ? y1 : seg(s);
        const Event ev = check(y[0], y[1]);
        if (ev == Event::None) {
          push(Sample::make(s, Radius::from_gap(y[0]), y[1]));
          s_prev = s;
          continue;
        }
        // bisect on the dense output between the last clean point and s
        double lo = s_prev, hi = s;
        Event ev_hi = ev;
        for (int it = 0; it < 200 && std::abs(hi - lo) > cfg_.abs_tol; ++it) {
          const double mid = 0.5 * (lo + hi);
          const Vec2 ym = seg(mid);
          const Event em = check(ym[0], ym[1]);
          if (em == Event::None) {
            lo = mid;
          } else {
            hi = mid;
            ev_hi = em;
          }
        }
        event = ev_hi;
        s_event = hi;
        y_event = seg(hi);
        if (event != Event::Origin && event != Event::UnitHard) {
          push(Sample::make(s_event, Radius::from_gap(y_event[0]), y_event[1]));
        }
        return false;
      }
      return true;
    };

    // the state is (r - 1, r') so that relative error control applies to the gap
    const auto res = ode::drive<2>(rhs, 0.0, Vec2{r0 - 1.0, 0.0}, dir_ * cfg_.span, 0.0, ctl, on_step);
    switch (res.status) {
      case ode::DriveStatus::ReachedEnd:
        result_.stop = StopReason::Completed;
        return;
      case ode::DriveStatus::Underflow:
      case ode::DriveStatus::NonFinite:
        result_.stop = StopReason::StepUnderflow;
        return;
      case ode::DriveStatus::Stopped:
        break;
    }
    switch (event) {
      case Event::Origin:
        result_.stop = StopReason::NearOrigin;
        break;
      case Event::UnitHard:
        result_.stop = StopReason::SingularUnit;
        break;
      case Event::VMax:
        result_.stop = StopReason::Blowup;
        break;
      case Event::UnitSwitch:
        run_unit_endgame(s_event, y_event[0], y_event[1]);
        break;
      case Event::InfinitySwitch:
        run_infinity_endgame(s_event, 1.0 + y_event[0], y_event[1]);
        break;
      case Event::None:
        result_.stop = StopReason::StepUnderflow;
        break;
    }
  }

  void run_unit_endgame(double s0, double gap0, double v0) {
    const double a = alpha_;
    const double sigma = gap0 > 0.0 ? 1.0 : -1.0;
    const double delta0 = std::abs(gap0);
    const double t_end = std::log(cfg_.eps_unit);
    const double t0 = std::log(delta0);
    if (t0 <= t_end) {
      result_.stop = StopReason::SingularUnit;
      return;
    }

    auto rhs = [a, sigma](double t, const Vec2& y) -> Vec2 {
      const double d = std::exp(t);
      const double u = 1.0 + sigma * d;
      const double n = y[1];
      return {sigma * std::pow(d, 1.0 - a) / n,
              u * (a * u + sigma * d) * std::pow(d, -2.0 * a) / n + 2.0 * sigma * d * n / u};
    };
    auto sample_at = [a, sigma](double t, const Vec2& y) {
      const double d = std::exp(t);
      return Sample::make(y[0], Radius::from_gap(sigma * d), std::pow(d, a) * y[1]);
    };

    ode::StepControl ctl{cfg_.rel_tol, cfg_.abs_tol, cfg_.endgame_dt / (1.0 - a)};
    const Vec2 y0{s0, v0 * std::pow(delta0, -a)};
    bool at_span = false;
    auto on_step = [&](const ode::DenseSegment<2>& seg, const Vec2& y1) {
      if (clip_to_span(seg, y1, sample_at)) {
        at_span = true;
        return false;
      }
      const bool final = seg.t1() == t_end;
      push(sample_at(final ? t_end : seg.t1(), y1), final);
      return true;
    };
    const auto res = ode::drive<2>(rhs, t0, y0, t_end, 0.0, ctl, on_step);
    if (at_span) {
      result_.stop = StopReason::Completed;
      return;
    }
    if (res.status != ode::DriveStatus::ReachedEnd) {
      result_.stop = StopReason::StepUnderflow;
      return;
    }
    result_.stop = StopReason::SingularUnit;
    // remaining angle: n is asymptotically constant, ds/dt ~ sigma e^{(1-a)t} / n
    const double d_end = std::exp(t_end);
    const double tail = sigma * std::pow(d_end, 1.0 - a) / ((1.0 - a) * res.y[1]);
    result_.limit_s = res.y[0] - tail;
  }

  void run_infinity_endgame(double s0, double u0, double v0) {
    const double a = alpha_;
    constexpr double t_floor = -700.0;
    auto rhs = [a](double t, const Vec2& y) -> Vec2 {
      const double rho = std::exp(t);
      const double m = y[1];
      return {-std::pow(rho, 1.0 + a) * m,
              m * (a * rho + std::pow(rho, 2.0 * a + 2.0) * m * m * (a + 1.0 - rho)) / (1.0 - rho)};
    };
    auto speed = [a](double t, double m) { return std::exp(-(2.0 + a) * t) / m; };
    auto sample_at = [&](double t, const Vec2& y) {
      const double r = std::exp(-t);
      return Sample::make(y[0], Radius::from_r(r), speed(t, y[1]));
    };

    ode::StepControl ctl{cfg_.rel_tol, cfg_.abs_tol, cfg_.endgame_dt / (2.0 + a)};
    const double t0 = -std::log(u0);
    const Vec2 y0{s0, std::pow(u0, 2.0 + a) / v0};

    bool hit = false;
    bool at_span = false;
    double t_hit = 0.0;
    Vec2 y_hit{};
    auto on_step = [&](const ode::DenseSegment<2>& seg, const Vec2& y1) {
      if (clip_to_span(seg, y1, sample_at)) {
        at_span = true;
        return false;
      }
      if (std::abs(speed(seg.t1(), y1[1])) < cfg_.v_max) {
        push(sample_at(seg.t1(), y1));
        return true;
      }
      double lo = seg.t0, hi = seg.t1();  // |v| < v_max at lo, >= at hi
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (std::abs(speed(mid, seg(mid)[1])) < cfg_.v_max) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      hit = true;
      t_hit = hi;
      y_hit = seg(hi);
      push(sample_at(t_hit, y_hit), true);
      return false;
    };
    const auto res = ode::drive<2>(rhs, t0, y0, t_floor, 0.0, ctl, on_step);
    if (at_span) {
      result_.stop = StopReason::Completed;
      return;
    }
    if (!hit) {
      result_.stop =
          res.status == ode::DriveStatus::ReachedEnd ? StopReason::Blowup : StopReason::StepUnderflow;
      return;
    }
    result_.stop = StopReason::Blowup;

    // continue without sampling until the remaining angle is negligible
    ode::StepControl tail_ctl{cfg_.rel_tol, cfg_.abs_tol};
    auto tail = [a](double t, double m) { return std::pow(std::exp(t), 1.0 + a) * m / (1.0 + a); };
    const double tiny = 1e-3 * cfg_.abs_tol;
    auto on_tail = [&](const ode::DenseSegment<2>& seg, const Vec2& y1) {
      return std::abs(tail(seg.t1(), y1[1])) > tiny;
    };
    const auto rest = ode::drive<2>(rhs, t_hit, y_hit, t_floor, 0.0, tail_ctl, on_tail);
    if (rest.status == ode::DriveStatus::Underflow || rest.status == ode::DriveStatus::NonFinite) {
      return;
    }
    result_.limit_s = rest.y[0] + tail(rest.t, rest.y[1]);
  }

  double alpha_;
  const SolverConfig& cfg_;
  double dir_;
  HalfResult result_;
};

void validate(const SolverConfig& cfg) {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(cfg.span) || !positive(cfg.rel_tol) || !positive(cfg.abs_tol) ||
      !positive(cfg.eps_unit) || !positive(cfg.eps_origin) || !positive(cfg.v_max) ||
      !positive(cfg.max_ds) || !positive(cfg.sample_fraction) || !positive(cfg.endgame_gap) ||
      !positive(cfg.endgame_speed) || !positive(cfg.endgame_dt) || cfg.max_samples < 2) {
    throw std::invalid_argument("integrate: solver settings must be positive and finite");
  }
}

}  // namespace

double second_derivative(const PowerParams& params, double r, double dr) {
  return second_derivative(params, Radius::from_r(r), dr);
}

double second_derivative(const PowerParams& params, Radius rad, double dr) {
  require_regular(rad, "second_derivative");
  return acceleration(params.alpha(), rad.r, rad.gap, dr);
}

PhaseVelocity vector_field(const PowerParams& params, PhasePoint p) {
  return {p.v, second_derivative(params, p.u, p.v)};
}

Trajectory integrate(const PowerParams& params, double r0, const SolverConfig& config) {
  if (!std::isfinite(r0)) {
    throw std::invalid_argument("integrate: r0 must be finite");
  }
  require_regular(Radius::from_r(r0), "integrate");
  validate(config);

  HalfResult fwd = HalfIntegrator(params, config, 1.0).run(r0);

  std::vector<Sample> negative;
  if (config.two_sided) {
    HalfResult bwd = HalfIntegrator(params, config, -1.0).run(r0);
    negative.assign(bwd.samples.rbegin(), bwd.samples.rend() - 1);
  } else {
    negative.reserve(fwd.samples.size());
    for (auto it = fwd.samples.rbegin(); it != fwd.samples.rend() - 1; ++it) {
      negative.push_back({-it->s, it->r, -it->dr, it->gap});
    }
  }

  Trajectory traj{params, r0, {}, fwd.stop, config, fwd.limit_s};
  traj.samples.reserve(negative.size() + fwd.samples.size());
  traj.samples.insert(traj.samples.end(), negative.begin(), negative.end());
  traj.samples.insert(traj.samples.end(), fwd.samples.begin(), fwd.samples.end());
  return traj;
}

std::optional<EquilibriumInfo> equilibrium(const PowerParams& params) {
  const auto radius = params.equilibrium_radius();
  if (!radius) {
    return std::nullopt;
  }
  const double a = params.alpha();
  const double k = -(a + 1.0) / a;  // lower-left entry; eigenvalues solve l^2 = k
  EquilibriumInfo info{};
  info.point = {*radius, 0.0};
  info.jacobian = {{{0.0, 1.0}, {k, 0.0}}};
  if (k < 0.0) {
    const double w = std::sqrt(-k);
    info.eigenvalues = {std::complex<double>(0.0, w), std::complex<double>(0.0, -w)};
    info.kind = EquilibriumKind::Center;
  } else {
    const double w = std::sqrt(k);
    info.eigenvalues = {std::complex<double>(w, 0.0), std::complex<double>(-w, 0.0)};
    info.kind = EquilibriumKind::Saddle;
  }
  return info;
}

bool is_stationary(const Trajectory& traj) {
  const double tol = 1e-13 * traj.r0;
  return std::all_of(traj.samples.begin(), traj.samples.end(),
                     [tol](const Sample& smp) { return std::abs(smp.dr) <= tol; });
}

std::vector<double> v_zero_crossings(const Trajectory& traj) {
  std::vector<double> out;
  if (traj.samples.size() < 3 || is_stationary(traj)) {
    return out;
  }
  const auto& smp = traj.samples;
  const double tol = traj.tolerances.abs_tol;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    if (smp[i].dr == 0.0) {
      if (i > 0 && smp[i - 1].dr * smp[i + 1].dr < 0.0) {
        out.push_back(smp[i].s);
      }
      continue;
    }
    if (smp[i].dr * smp[i + 1].dr < 0.0) {
      auto f = [&](double s) { return traj.interpolate(s).dr; };
      std::uintmax_t iters = 100;
      auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
      const auto [lo, hi] = boost::math::tools::toms748_solve(f, smp[i].s, smp[i + 1].s, smp[i].dr,
                                                              smp[i + 1].dr, stop, iters);
      out.push_back(0.5 * (lo + hi));
    }
  }
  return out;
}

MidpointResidual midpoint_el_residuals(const Trajectory& traj) {
  MidpointResidual out;
  const auto& smp = traj.samples;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double ds = smp[i + 1].s - smp[i].s;
    const double s_mag = std::max({1.0, std::abs(smp[i].s), std::abs(smp[i + 1].s)});
    if (ds < 1e-8 * s_mag) {
      ++out.unresolved;
      continue;
    }
    const double mid = smp[i].s + 0.5 * ds;
    const Jet jet = traj.interpolate(mid);
    const double scale = el_scale(traj.params, jet.radius, jet.dr, jet.ddr);
    const double res = el_residual(traj.params, jet.radius, jet.dr, jet.ddr);
    const double rel = scale > 0.0 ? std::abs(res) / scale : std::abs(res);
    ++out.checked;
    if (rel > out.max_relative) {
      out.max_relative = rel;
      out.worst_s = mid;
    }
  }
  return out;
}

}  // namespace catenary
