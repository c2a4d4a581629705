#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with the 4th-order
// continuous extension and a PI step-size controller, following the
// classic DOPRI5 layout (Hairer, Norsett & Wanner, Solving ODEs I).
//
// Fixed-size states only; the right-hand side is f(t, y) -> dy/dt.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace catenary::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Continuous output on [t0, t0 + h].
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<Vec<N>, 5> c{};

  double t1() const noexcept { return t0 + h; }

  Vec<N> operator()(double t) const noexcept {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    Vec<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i])));
    }
    return out;
  }
};

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_max = std::numeric_limits<double>::infinity();
};

enum class DriveStatus { ReachedEnd, Stopped, Underflow, NonFinite };

template <std::size_t N>
struct DriveResult {
  DriveStatus status;
  double t;
  Vec<N> y;
  double h;  // last proposed step
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

template <std::size_t N>
struct Trial {
  Vec<N> y1;
  Vec<N> k7;  // f(t + h, y1), reused as the next k1
  double err;
  DenseSegment<N> dense;
};

template <std::size_t N>
double error_norm(const Vec<N>& delta, const Vec<N>& y0, const Vec<N>& y1, const StepControl& ctl) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double q = delta[i] / sk;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(N));
}

/// One Dormand-Prince attempt from (t, y) with derivative k1 and step h.
template <std::size_t N, class F>
Trial<N> attempt(F& f, double t, const Vec<N>& y, const Vec<N>& k1, double h, const StepControl& ctl) {
  using namespace dp;
  Vec<N> tmp{};
  auto stage = [&](auto&& combine) {
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + h * combine(i);
    }
    return tmp;
  };
  const Vec<N> k2 = f(t + c2 * h, stage([&](std::size_t i) { return a21 * k1[i]; }));
  const Vec<N> k3 = f(t + c3 * h, stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }));
  const Vec<N> k4 =
      f(t + c4 * h, stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; }));
  const Vec<N> k5 = f(t + c5 * h, stage([&](std::size_t i) {
                        return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                      }));
  const Vec<N> k6 = f(t + h, stage([&](std::size_t i) {
                        return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
                      }));
  Trial<N> out;
  out.y1 = stage([&](std::size_t i) {
    return a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i];
  });
  out.k7 = f(t + h, out.y1);

  Vec<N> delta{};
  for (std::size_t i = 0; i < N; ++i) {
    delta[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.k7[i]);
  }
  out.err = error_norm(delta, y, out.y1, ctl);

  out.dense.t0 = t;
  out.dense.h = h;
  for (std::size_t i = 0; i < N; ++i) {
    const double dy = out.y1[i] - y[i];
    const double bspl = h * k1[i] - dy;
    out.dense.c[0][i] = y[i];
    out.dense.c[1][i] = dy;
    out.dense.c[2][i] = bspl;
    out.dense.c[3][i] = dy - h * out.k7[i] - bspl;
    out.dense.c[4][i] =
        h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * out.k7[i]);
  }
  return out;
}

/// Starting step heuristic (signed by direction).
template <std::size_t N, class F>
double initial_step(F& f, double t, const Vec<N>& y, const Vec<N>& f0, double direction,
                    const StepControl& ctl) {
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
    d0 += (y[i] / sk) * (y[i] / sk);
    d1 += (f0[i] / sk) * (f0[i] / sk);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, ctl.h_max);
  Vec<N> y1{};
  for (std::size_t i = 0; i < N; ++i) {
    y1[i] = y[i] + direction * h0 * f0[i];
  }
  const Vec<N> f1 = f(t + direction * h0, y1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
    d2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  d2 = std::sqrt(d2 / N) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  double h = std::min({100.0 * h0, h1, ctl.h_max});
  if (!std::isfinite(h) || h <= 0.0) {
    h = 1e-6;
  }
  return direction * h;
}

/// Integrate from t0 toward t_end. After every accepted step
/// on_step(segment, y_end) is called with the dense segment and the state at
/// its end; it returns false to stop. Stage evaluations that produce non-finite values
/// are treated as rejected steps.
template <std::size_t N, class F, class OnStep>
DriveResult<N> drive(F&& f, double t0, Vec<N> y0, double t_end, double h_init, const StepControl& ctl,
                     OnStep&& on_step) {
  constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
  constexpr int max_nonfinite = 60;

  const double direction = t_end >= t0 ? 1.0 : -1.0;
  double t = t0;
  Vec<N> y = y0;
  Vec<N> k1 = f(t, y);
  for (double v : k1) {
    if (!std::isfinite(v)) {
      return {DriveStatus::NonFinite, t, y, 0.0};
    }
  }
  double h = h_init != 0.0 ? direction * std::abs(h_init) : initial_step(f, t, y, k1, direction, ctl);
  double facold = 1e-4;
  bool last_rejected = false;
  int nonfinite = 0;

  while (direction * (t_end - t) > 0.0) {
    if (std::abs(h) > ctl.h_max) {
      h = direction * ctl.h_max;
    }
    bool last = false;
    if (direction * (t + h - t_end) >= 0.0) {
      h = t_end - t;
      last = true;
    }
    const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (std::abs(h) < h_floor) {
      return {DriveStatus::Underflow, t, y, h};
    }

    Trial<N> trial = attempt(f, t, y, k1, h, ctl);
    bool finite = std::isfinite(trial.err);
    for (double v : trial.k7) {
      finite = finite && std::isfinite(v);
    }
    if (!finite) {
      if (++nonfinite > max_nonfinite) {
        return {DriveStatus::NonFinite, t, y, h};
      }
      h *= 0.2;
      last_rejected = true;
      continue;
    }

    const double fac11 = std::pow(trial.err, expo1);
    if (trial.err <= 1.0) {
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double h_new = h / fac;
      facold = std::max(trial.err, 1e-4);
      t = last ? t_end : t + h;
      y = trial.y1;
      k1 = trial.k7;
      if (last_rejected) {
        h_new = direction * std::min(std::abs(h_new), std::abs(h));
      }
      last_rejected = false;
      if (!on_step(trial.dense, y)) {
        return {DriveStatus::Stopped, t, y, h_new};
      }
      h = h_new;
    } else {
      h = h / std::min(facc1, fac11 / safe);
      last_rejected = true;
    }
  }
  return {DriveStatus::ReachedEnd, t, y, h};
}

}  // namespace catenary::ode
