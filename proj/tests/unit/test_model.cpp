#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "catenary/model.hpp"

using namespace catenary;

TEST(PowerParams, RejectsNonFiniteAndZero) {
  EXPECT_THROW((void)PowerParams(std::nan("")), std::invalid_argument);
  EXPECT_THROW((void)PowerParams(HUGE_VAL), std::invalid_argument);
  EXPECT_THROW((void)PowerParams(0.0), std::invalid_argument);
}

TEST(PowerParams, EquilibriumRadius) {
  EXPECT_DOUBLE_EQ(*PowerParams(1.0).equilibrium_radius(), 0.5);
  EXPECT_DOUBLE_EQ(*PowerParams(-0.5).equilibrium_radius(), 2.0);
  EXPECT_FALSE(PowerParams(-1.0).equilibrium_radius());
  EXPECT_FALSE(PowerParams(-2.5).equilibrium_radius());
  EXPECT_TRUE(PowerParams(3.0).is_integer());
  EXPECT_FALSE(PowerParams(0.5).is_integer());
}

TEST(Geometry, CircleCurvatureIsInverseRadius) {
  for (double r : {0.3, 1.0, 4.0}) {
    EXPECT_NEAR(curvature(r, 0.0, 0.0), 1.0 / r, 1e-15);
    EXPECT_DOUBLE_EQ(cos_phi(r, 0.0), -1.0);
  }
}

TEST(Geometry, StraightLineHasZeroCurvature) {
  // x = 2 in polar form: r = 2 sec s
  for (double s : {-1.0, -0.3, 0.0, 0.7, 1.2}) {
    const double sec = 1.0 / std::cos(s), tan = std::tan(s);
    const double r = 2 * sec, dr = 2 * sec * tan, ddr = 2 * sec * (tan * tan + sec * sec);
    EXPECT_NEAR(curvature(r, dr, ddr), 0.0, 1e-12 * (1 + std::abs(ddr)));
  }
}

TEST(Geometry, CosPhiMatchesDefinition) {
  const double r = 1.7, dr = -0.9;
  EXPECT_NEAR(cos_phi(r, dr), -r / std::hypot(r, dr), 1e-15);
}

TEST(Geometry, DistancePowerUsesGap) {
  const PowerParams p(0.5);
  EXPECT_DOUBLE_EQ(distance_power(p, Radius::from_r(0.75)), 0.5);
  // near the circle the gap carries the precision that r cannot
  const Radius tiny = Radius::from_gap(1e-20);
  EXPECT_DOUBLE_EQ(distance_power(PowerParams(1.0), tiny), 1e-20);
}

TEST(Geometry, RequireRegular) {
  EXPECT_THROW(require_regular(Radius::from_r(1.0), "t"), SingularStateError);
  EXPECT_THROW(require_regular(Radius::from_r(0.0), "t"), SingularStateError);
  EXPECT_THROW(require_regular(Radius::from_r(-1.0), "t"), SingularStateError);
  EXPECT_NO_THROW(require_regular(Radius::from_r(0.999), "t"));
}

TEST(EulerLagrange, ConstantSolutionHasZeroResidual) {
  for (double a : {-0.75, -0.5, 0.5, 1.0, 3.0}) {
    const PowerParams p(a);
    const double r = *p.equilibrium_radius();
    EXPECT_NEAR(el_residual(p, r, 0.0, 0.0), 0.0, 1e-15) << a;
    EXPECT_NEAR(curvature_relation_residual(p, r, 0.0, 0.0), 0.0, 1e-13) << a;
  }
}

TEST(EulerLagrange, OtherCirclesAreNotSolutions) {
  const PowerParams p(1.0);
  EXPECT_GT(std::abs(el_residual(p, 0.6, 0.0, 0.0)), 1e-2);
}

TEST(EulerLagrange, ResidualAgreesWithCurvatureRelation) {
  // r(r-1) r'' - RHS vanishes exactly when kappa = alpha cos(phi)/(r-1); pick
  // r'' from the ODE and check both forms.
  for (double a : {-3.0, -0.5, 2.0}) {
    const PowerParams p(a);
    for (double r : {0.4, 1.6}) {
      const double dr = 0.3;
      const double ddr = (((a + 2) * r - 2) * dr * dr + ((a + 1) * r - 1) * r * r) / (r * (r - 1));
      EXPECT_NEAR(el_residual(p, r, dr, ddr), 0.0, 1e-14 * el_scale(p, Radius::from_r(r), dr, ddr));
      EXPECT_NEAR(curvature_relation_residual(p, r, dr, ddr), 0.0, 1e-13);
    }
  }
}

TEST(Energy, ConstantCircleClosedForm) {
  const PowerParams p(1.0);
  std::vector<Sample> curve;
  for (int i = 0; i <= 64; ++i) {
    curve.push_back(Sample::make(2 * std::numbers::pi * i / 64, 0.5, 0.0));
  }
  EXPECT_NEAR(energy(p, curve), 0.5 * 0.5 * 2 * std::numbers::pi, 1e-14);
}

TEST(Energy, NonUniformGridAgreesWithFineGrid) {
  // r = 2 + s^2/10 on [0, 1], irregular nodes against a fine uniform grid
  const PowerParams p(1.0);
  auto make = [](double s) { return Sample::make(s, 2 + s * s / 10, s / 5); };
  std::vector<Sample> coarse, fine;
  for (int i = 0; i <= 41; ++i) coarse.push_back(make(std::pow(i / 41.0, 1.5)));  // odd interval count
  for (int i = 0; i <= 4000; ++i) fine.push_back(make(i / 4000.0));
  EXPECT_NEAR(energy(p, coarse), energy(p, fine), 1e-7);
}

TEST(Cartesian, PolarToPlane) {
  const std::vector<Sample> c{Sample::make(0.0, 2.0, 0.0), Sample::make(std::numbers::pi / 2, 3.0, 0.0)};
  const auto xy = to_cartesian(c);
  EXPECT_DOUBLE_EQ(xy[0].x, 2.0);
  EXPECT_DOUBLE_EQ(xy[0].y, 0.0);
  EXPECT_NEAR(xy[1].x, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(xy[1].y, 3.0);
}
