#include <cmath>

#include <gtest/gtest.h>

#include "catenary/classify.hpp"
#include "catenary/dynamics.hpp"
#include "catenary/variation.hpp"

using namespace catenary;

TEST(BumpBasis, ModesVanishAtWindowEdges) {
  const BumpBasis b(4, 0.0, 10.0, 1.0, 9.0);
  for (std::size_t k = 0; k < b.count(); ++k) {
    const auto [lo, hi] = b.window(k);
    EXPECT_NEAR(b.value(k, lo), 0.0, 1e-15);
    EXPECT_NEAR(b.value(k, hi), 0.0, 1e-15);
    EXPECT_NEAR(b.derivative(k, lo), 0.0, 1e-15);
    EXPECT_NEAR(b.derivative(k, hi), 0.0, 1e-15);
    EXPECT_NEAR(b.value(k, 0.5 * (lo + hi)), 1.0, 1e-15);
    EXPECT_EQ(b.value(k, 0.0), 0.0);
  }
  EXPECT_NEAR(b.window(0).first, 1.0, 1e-15);
  EXPECT_NEAR(b.window(3).second, 9.0, 1e-15);
}

TEST(BumpBasis, DerivativeMatchesFiniteDifference) {
  const BumpBasis b = BumpBasis::centred(-2.0, 2.0, 3);
  for (double s : {-1.2, -0.3, 0.4, 1.1}) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double fd = (b.value(k, s + 1e-6) - b.value(k, s - 1e-6)) / 2e-6;
      EXPECT_NEAR(b.derivative(k, s), fd, 1e-6);
    }
  }
}

TEST(BumpBasis, RejectsBadSupport) {
  EXPECT_THROW(BumpBasis(0, 0, 1, 0.1, 0.9), std::invalid_argument);
  EXPECT_THROW(BumpBasis(2, 0, 1, -0.1, 0.9), std::invalid_argument);
  EXPECT_THROW(BumpBasis::centred(0, 1, 2, 1.5), std::invalid_argument);
}

TEST(Stationarity, SolutionIsStationary) {
  const PowerParams p(1.0);
  const Trajectory t = integrate(p, 0.25);
  const double T = period(t);
  const BumpBasis basis = BumpBasis::centred(-T / 2, T / 2);
  EXPECT_LE(stationarity_defect(p, t, basis, default_step(t, -T / 2, T / 2)), 1e-6);
}

TEST(Stationarity, OtherRegimes) {
  for (auto [a, r0] : {std::pair{-0.5, 0.75}, {2.0, 2.0}, {-3.0, 2.0}}) {
    const PowerParams p(a);
    const Trajectory t = integrate(p, r0);
    // stay clear of the singular end of the run
    const double hi = 0.6 * t.s_max();
    const BumpBasis basis = BumpBasis::centred(-hi, hi, 4);
    EXPECT_LE(stationarity_defect(p, t, basis, default_step(t, -hi, hi)), 1e-6) << a << " " << r0;
  }
}

TEST(Stationarity, ConstantSolutionAndControl) {
  const PowerParams p(1.0);
  const BumpBasis basis = BumpBasis::centred(-2.0, 2.0);
  const CurveFn eq = [](double) { return CurvePoint{Radius::from_r(0.5), 0.0}; };
  const CurveFn off = [](double) { return CurvePoint{Radius::from_r(0.6), 0.0}; };
  EXPECT_LE(stationarity_defect(p, eq, basis, 1e-5), 1e-8);
  EXPECT_GE(stationarity_defect(p, off, basis, 1e-5), 1e-2);
}

TEST(Stationarity, SecondOrderInStep) {
  const PowerParams p(1.0);
  const Trajectory t = integrate(p, 0.25);
  const double T = period(t);
  const ConvergenceFit fit = defect_convergence(p, t, BumpBasis::centred(-T / 2, T / 2), {1e-2, 1e-3, 1e-4});
  ASSERT_EQ(fit.defects.size(), 3u);
  EXPECT_GE(fit.order, 1.9);
  EXPECT_LE(fit.order, 2.1);
}

TEST(Stationarity, RejectsNonPositiveStep) {
  const PowerParams p(1.0);
  const CurveFn eq = [](double) { return CurvePoint{Radius::from_r(0.5), 0.0}; };
  EXPECT_THROW(stationarity_defect(p, eq, BumpBasis::centred(0, 1), 0.0), std::invalid_argument);
}
