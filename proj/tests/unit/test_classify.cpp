#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catenary/classify.hpp"
#include "catenary/dynamics.hpp"

using namespace catenary;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Predicted, DecisionTable) {
  EXPECT_EQ(predicted_regime(PowerParams(1.0), 0.5), Regime::ConstantCircle);
  EXPECT_EQ(predicted_regime(PowerParams(1.0), 0.25), Regime::PeriodicInner);
  EXPECT_EQ(predicted_regime(PowerParams(2.0), 3.0), Regime::OuterAsymptotic);
  EXPECT_EQ(predicted_regime(PowerParams(-0.5), 0.75), Regime::OrthogonalHitConvex);
  EXPECT_EQ(predicted_regime(PowerParams(-0.5), 1.5), Regime::OrthogonalHitConcave);
  EXPECT_EQ(predicted_regime(PowerParams(-0.5), 3.0), Regime::OuterUnboundedConvex);
  EXPECT_EQ(predicted_regime(PowerParams(-3.0), 0.25), Regime::OrthogonalHitConvex);
  EXPECT_EQ(predicted_regime(PowerParams(-3.0), 2.0), Regime::OrthogonalHitConcave);
  EXPECT_THROW(predicted_regime(PowerParams(1.0), 1.0), SingularStateError);
}

TEST(Regime, StringRoundTrip) {
  for (auto r : {Regime::ConstantCircle, Regime::PeriodicInner, Regime::OuterAsymptotic, Regime::OrthogonalHitConvex,
                 Regime::OrthogonalHitConcave, Regime::OuterUnboundedConvex, Regime::Unresolved}) {
    EXPECT_EQ(regime_from_string(to_string(r)), r);
  }
  EXPECT_FALSE(regime_from_string("periodic"));
}

TEST(Classify, MeasuredRegimesAgreeWithTableOnAGrid) {
  for (double a : {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0}) {
    for (double r0 : {0.3, 0.8, 1.4, 2.5, 6.0}) {
      const PowerParams p(a);
      EXPECT_EQ(classify(p, r0).regime, predicted_regime(p, r0)) << a << " " << r0;
    }
  }
}

TEST(Classify, PeriodicReportFields) {
  const ClassificationReport rep = classify(PowerParams(1.0), 0.25);
  ASSERT_EQ(rep.regime, Regime::PeriodicInner);
  ASSERT_TRUE(rep.period && rep.extrema);
  EXPECT_NEAR(*rep.period, 4.28517982176928, 1e-8);
  EXPECT_NEAR(rep.extrema->first, 0.25, 1e-9);
  EXPECT_NEAR(rep.extrema->second, 0.75, 1e-9);
  EXPECT_FALSE(rep.blowup_angle);
  EXPECT_FALSE(rep.orthogonality_defect);
}

TEST(Classify, PeriodsMatchQuadratureOracle) {
  EXPECT_NEAR(*classify(PowerParams(1.0), 0.2).period, 4.20080348682302, 1e-8);
  EXPECT_NEAR(*classify(PowerParams(1.0), 0.4).period, 4.42024275886383, 1e-8);
}

TEST(Classify, OuterAsymptoticReportsBlowupAngle) {
  const ClassificationReport rep = classify(PowerParams(1.0), 2.0);
  ASSERT_EQ(rep.regime, Regime::OuterAsymptotic);
  ASSERT_TRUE(rep.blowup_angle);
  EXPECT_LT(*rep.blowup_angle, kPi / 2);
  EXPECT_NEAR(*rep.blowup_angle, 0.582568284458476, 1e-8);
}

TEST(Classify, OrthogonalHit) {
  const ClassificationReport rep = classify(PowerParams(-3.0), 2.0);
  ASSERT_EQ(rep.regime, Regime::OrthogonalHitConcave);
  EXPECT_EQ(rep.stop_reason, StopReason::SingularUnit);
  ASSERT_TRUE(rep.orthogonality_defect);
  EXPECT_LE(*rep.orthogonality_defect, 1e-3);
}

TEST(Classify, ConstantCircle) {
  const ClassificationReport rep = classify(PowerParams(-0.5), 2.0);
  EXPECT_EQ(rep.regime, Regime::ConstantCircle);
  EXPECT_EQ(rep.conservation_drift, 0.0);
}

TEST(Classify, SolverFailureBecomesUnresolved) {
  ClassifyConfig cfg;
  cfg.solver.max_samples = 20;
  const ClassificationReport rep = classify(PowerParams(1.0), 0.25, cfg);
  EXPECT_EQ(rep.regime, Regime::Unresolved);
  EXPECT_FALSE(rep.notes.empty());
}

TEST(Features, HalfPeriodSwap) {
  for (double r0 : {0.2, 0.3, 0.7}) {
    const SwapDefect sw = half_period_swap_defect(r0);
    EXPECT_LE(sw.defect, 1e-6);
    EXPECT_NEAR(sw.other_extremum, 1 - r0, 1e-9);
  }
  EXPECT_THROW(half_period_swap_defect(1.5), std::invalid_argument);
}

TEST(Features, PeriodicityDefect) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  EXPECT_LE(periodicity_defect(t, period(t)), 1e-7);
  EXPECT_GT(periodicity_defect(t, 0.9 * period(t)), 1e-2);
}

TEST(Features, PeriodNeedsCriticalPoints) {
  EXPECT_THROW(period(integrate(PowerParams(1.0), 2.0)), std::invalid_argument);
}

TEST(Features, InversionDuality) {
  for (double r0 : {2.0, 3.0}) EXPECT_LE(inversion_defect(r0), 1e-6);
}

TEST(Features, AsymptoteAngleNeedsBlowup) {
  EXPECT_THROW(asymptote_angle(integrate(PowerParams(1.0), 0.25)), std::invalid_argument);
  EXPECT_THROW(orthogonality_defect(integrate(PowerParams(1.0), 0.25)), std::invalid_argument);
}

TEST(Features, HausdorffDecreasesWithR0) {
  const double a = segment_hausdorff_distance(1e-2);
  const double b = segment_hausdorff_distance(1e-3);
  EXPECT_LT(b, a);
  EXPECT_LT(b, 0.05);
}
