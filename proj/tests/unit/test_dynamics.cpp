#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catenary/conservation.hpp"
#include "catenary/dynamics.hpp"

using namespace catenary;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(VectorField, MatchesSecondDerivative) {
  const PowerParams p(2.0);
  const PhaseVelocity v = vector_field(p, {1.5, -0.4});
  EXPECT_DOUBLE_EQ(v.du, -0.4);
  EXPECT_DOUBLE_EQ(v.dv, second_derivative(p, 1.5, -0.4));
  EXPECT_THROW(second_derivative(p, 1.0, 0.0), SingularStateError);
}

TEST(Integrate, RejectsSingularStart) {
  EXPECT_THROW(integrate(PowerParams(1.0), 1.0), SingularStateError);
  EXPECT_THROW(integrate(PowerParams(1.0), 0.0), SingularStateError);
}

TEST(Integrate, ConstantSolutionStaysPut) {
  const Trajectory t = integrate(PowerParams(1.0), 0.5);
  EXPECT_EQ(t.stop_reason, StopReason::Completed);
  EXPECT_TRUE(is_stationary(t));
  EXPECT_TRUE(v_zero_crossings(t).empty());
  for (const auto& smp : t.samples) EXPECT_EQ(smp.r, 0.5);
  EXPECT_NEAR(t.s_min(), -4 * kPi, 1e-12);
  EXPECT_NEAR(t.s_max(), 4 * kPi, 1e-12);
}

TEST(Integrate, SymmetricAboutZero) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  for (double s : {0.3, 1.7, 5.0}) {
    EXPECT_NEAR(t.interpolate(s).radius.r, t.interpolate(-s).radius.r, 1e-12);
  }
}

TEST(Integrate, TwoSidedAgreesWithMirror) {
  SolverConfig cfg;
  cfg.two_sided = true;
  const Trajectory a = integrate(PowerParams(1.0), 0.25, cfg);
  const Trajectory b = integrate(PowerParams(1.0), 0.25);
  for (double s : {-6.0, -2.5, 1.0, 4.0}) {
    EXPECT_NEAR(a.interpolate(s).radius.r, b.interpolate(s).radius.r, 1e-8);
  }
}

TEST(Integrate, SamplesAreStrictlyIncreasing) {
  const Trajectory t = integrate(PowerParams(-0.5), 0.75);
  ASSERT_GT(t.samples.size(), 10u);
  for (std::size_t i = 1; i < t.samples.size(); ++i) EXPECT_LT(t.samples[i - 1].s, t.samples[i].s);
}

// First hitting angles computed independently from the first integral by
// high-precision quadrature.
TEST(Integrate, BlowupAngleMatchesQuadratureOracle) {
  const Trajectory t = integrate(PowerParams(1.0), 2.0);
  EXPECT_EQ(t.stop_reason, StopReason::Blowup);
  ASSERT_TRUE(t.limit_s);
  EXPECT_NEAR(*t.limit_s, 0.582568284458476, 1e-8);
  const Trajectory u = integrate(PowerParams(3.0), 1.5);
  EXPECT_NEAR(*u.limit_s, 0.176658497132656, 1e-8);
}

TEST(Integrate, UnitHitAngleMatchesQuadratureOracle) {
  const Trajectory t = integrate(PowerParams(-1.0), 0.5);
  EXPECT_EQ(t.stop_reason, StopReason::SingularUnit);
  ASSERT_TRUE(t.limit_s);
  EXPECT_NEAR(*t.limit_s, kPi / 2 - 1, 1e-7);
  EXPECT_NEAR(*integrate(PowerParams(-1.0), 2.0).limit_s, 0.847602825517394, 1e-7);
  // alpha = -2: r0 and 1/r0 hit at the same angle
  EXPECT_NEAR(*integrate(PowerParams(-2.0), 0.5).limit_s, 0.405659757877944, 1e-7);
  EXPECT_NEAR(*integrate(PowerParams(-2.0), 2.0).limit_s, 0.405659757877944, 1e-7);
  EXPECT_NEAR(*integrate(PowerParams(-2.0), 3.0).limit_s, 0.621622657586356, 1e-7);
  EXPECT_NEAR(*integrate(PowerParams(-3.0), 0.25).limit_s, 0.640200810238131, 1e-7);
  EXPECT_NEAR(*integrate(PowerParams(-3.0), 2.0).limit_s, 0.268929107261331, 1e-7);
}

TEST(Integrate, StopsNeverOvershootSpan) {
  SolverConfig cfg;
  for (double r0 : {4.9, 5.5}) {
    const Trajectory t = integrate(PowerParams(-0.8), r0, cfg);
    EXPECT_LE(t.s_max(), cfg.span + 1e-12) << r0;
  }
}

TEST(Integrate, SampleBudgetExhaustionThrows) {
  SolverConfig cfg;
  cfg.max_samples = 50;
  EXPECT_ANY_THROW(integrate(PowerParams(1.0), 0.25, cfg));
}

TEST(Integrate, MidpointResidualSmallAcrossRegimes) {
  for (auto [a, r0] : {std::pair{1.0, 0.25}, {1.0, 3.0}, {-0.5, 0.75}, {-0.5, 3.0}, {-3.0, 2.0}, {0.5, 1.2}}) {
    const MidpointResidual m = midpoint_el_residuals(integrate(PowerParams(a), r0));
    EXPECT_LE(m.max_relative, 1e-6) << a << " " << r0;
    EXPECT_GT(m.checked, 100u);
  }
}

TEST(Equilibrium, Classification) {
  const auto one = equilibrium(PowerParams(1.0));
  ASSERT_TRUE(one);
  EXPECT_EQ(one->kind, EquilibriumKind::Center);
  EXPECT_EQ(one->point.u, 0.5);
  EXPECT_EQ(one->jacobian[1][0], -2.0);
  EXPECT_NEAR(one->eigenvalues[0].imag(), std::sqrt(2.0), 1e-15);

  const auto half = equilibrium(PowerParams(-0.5));
  ASSERT_TRUE(half);
  EXPECT_EQ(half->kind, EquilibriumKind::Saddle);
  EXPECT_EQ(half->point.u, 2.0);
  EXPECT_NEAR(half->eigenvalues[0].real(), 1.0, 1e-15);  // l^2 = -(a+1)/a = 1

  EXPECT_FALSE(equilibrium(PowerParams(-1.0)));
}

TEST(Crossings, PeriodicRunHasEvenlySpacedCriticalPoints) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  const auto c = v_zero_crossings(t);
  ASSERT_GE(c.size(), 5u);
  for (std::size_t i = 1; i < c.size(); ++i) {
    EXPECT_NEAR(c[i] - c[i - 1], 4.28517982176928 / 2, 1e-8);
  }
}

TEST(Energy, TruncatedNearCircleForStrongAttraction) {
  const Trajectory t = integrate(PowerParams(-3.0), 0.25);
  const TrajectoryEnergy e = trajectory_energy(t);
  EXPECT_TRUE(e.truncated);
  EXPECT_TRUE(std::isfinite(e.value));
  EXPECT_GT(e.value, 0.0);
  const TrajectoryEnergy c = trajectory_energy(integrate(PowerParams(1.0), 0.5));
  EXPECT_FALSE(c.truncated);
  EXPECT_NEAR(c.value, 0.25 * 8 * kPi, 1e-12);
}

TEST(StopReason, StringRoundTrip) {
  for (auto r : {StopReason::Completed, StopReason::SingularUnit, StopReason::NearOrigin, StopReason::Blowup,
                 StopReason::StepUnderflow}) {
    EXPECT_EQ(stop_reason_from_string(to_string(r)), r);
  }
  EXPECT_FALSE(stop_reason_from_string("Nope"));
}
