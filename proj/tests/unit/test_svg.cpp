#include <gtest/gtest.h>

#include "catenary/dynamics.hpp"
#include "catenary/svg.hpp"

using namespace catenary;

TEST(Svg, CartesianPlotIsSelfContained) {
  const std::string svg = cartesian_svg({integrate(PowerParams(1.0), 0.25)});
  EXPECT_EQ(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0), 0u);
  EXPECT_NE(svg.find("class=\"unit-circle\""), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  // nothing external: the namespace URI is the only URL
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("http", 20), std::string::npos);
}

TEST(Svg, BlowupBranchIsClipped) {
  const std::string svg = cartesian_svg({integrate(PowerParams(1.0), 2.0)}, 4.0);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
}

TEST(Svg, PhasePortraitMarksSaddle) {
  SolverConfig cfg;
  cfg.two_sided = true;
  std::vector<Trajectory> runs;
  for (double r0 : {0.5, 1.5, 2.5, 3.0}) runs.push_back(integrate(PowerParams(-0.5), r0, cfg));
  const std::string svg = phase_svg(PowerParams(-0.5), runs, {0, 3.5, -3, 3});
  EXPECT_NE(svg.find("class=\"equilibrium\""), std::string::npos);
  EXPECT_NE(svg.find("#b8332b\"/>"), std::string::npos);  // saddle colour
  EXPECT_NE(svg.find("class=\"singular\""), std::string::npos);
}

TEST(Svg, PhasePortraitWithoutEquilibrium) {
  const std::string svg = phase_svg(PowerParams(-2.0), {integrate(PowerParams(-2.0), 2.0)}, {0, 3, -3, 3});
  EXPECT_EQ(svg.find("class=\"equilibrium\""), std::string::npos);
  EXPECT_THROW(phase_svg(PowerParams(1.0), {}, {1, 1, 0, 1}), std::invalid_argument);
}
