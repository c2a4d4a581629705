#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "catenary/dynamics.hpp"
#include "catenary/io.hpp"

using namespace catenary;
using nlohmann::json;

namespace {

std::string csv_of(const Trajectory& t) {
  std::ostringstream out;
  write_trajectory_csv(out, t);
  return out.str();
}

std::vector<CsvRow> parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

}  // namespace

TEST(Csv, HeaderAndLineEndings) {
  const std::string text = csv_of(integrate(PowerParams(1.0), 0.25));
  EXPECT_EQ(text.substr(0, text.find('\n')), "s,r,dr,kappa,J,x,y");
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Csv, RoundTripIsBitExact) {
  for (auto [a, r0] : {std::pair{1.0, 0.25}, {-3.0, 2.0}, {2.0, 2.0}}) {
    const Trajectory t = integrate(PowerParams(a), r0);
    const std::string text = csv_of(t);
    const auto rows = parse(text);
    EXPECT_EQ(rows, trajectory_rows(t));
    std::ostringstream again;
    write_csv(again, rows);
    EXPECT_EQ(again.str(), text);
  }
}

TEST(Csv, FormatNumberRoundTripsAwkwardValues) {
  for (double x : {0.1, 1.0 / 3.0, -0.0, 5e-324, std::numeric_limits<double>::max(), 1e-300}) {
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("s,r,dr\n"), ParseError);
  EXPECT_THROW(parse("s,r,dr,kappa,J,x,y\n1,2,3\n"), ParseError);
  EXPECT_THROW(parse("s,r,dr,kappa,J,x,y\n1,2,3,4,5,6,x\n"), ParseError);
  EXPECT_THROW(parse("s,r,dr,kappa,J,x,y\r\n1,2,3,4,5,6,7\r\n"), ParseError);
  EXPECT_EQ(parse("s,r,dr,kappa,J,x,y\n1,2,3,4,5,6,7\n").size(), 1u);
}

TEST(Csv, ColumnsAreRecomputable) {
  const Trajectory t = integrate(PowerParams(1.0), 0.25);
  for (const auto& row : trajectory_rows(t)) {
    EXPECT_NEAR(row.x, row.r * std::cos(row.s), 1e-15);
    EXPECT_NEAR(row.J, 0.25 * 0.75, 1e-8);
  }
}

TEST(Json, ReportRoundTrip) {
  for (auto [a, r0] : {std::pair{1.0, 0.25}, {1.0, 2.0}, {-3.0, 2.0}, {1.0, 0.5}, {-0.5, 3.0}}) {
    const ClassificationReport rep = classify(PowerParams(a), r0);
    const std::string text = report_to_json(rep).dump();
    const ClassificationReport back = report_from_json(json::parse(text));
    EXPECT_EQ(report_to_json(back).dump(), text);
    EXPECT_EQ(back.regime, rep.regime);
  }
}

TEST(Json, AbsentOptionalsAreOmitted) {
  const json j = report_to_json(classify(PowerParams(1.0), 2.0));
  EXPECT_FALSE(j.contains("period"));
  EXPECT_TRUE(j.contains("blowup_angle"));
  EXPECT_TRUE(j.contains("momentum_drift"));
}

TEST(Json, NullIsReadAsAbsent) {
  json j = report_to_json(classify(PowerParams(1.0), 2.0));
  j["period"] = nullptr;
  EXPECT_FALSE(report_from_json(j).period);
}

TEST(Json, StrictValidation) {
  const json good = report_to_json(classify(PowerParams(1.0), 0.25));
  EXPECT_NO_THROW(validate_report(good));
  json extra = good;
  extra["colour"] = "blue";
  EXPECT_THROW(validate_report(extra), ParseError);
  json regime = good;
  regime["regime"] = "Spiral";
  EXPECT_THROW(report_from_json(regime), ParseError);
  json type = good;
  type["r0"] = "0.25";
  EXPECT_THROW(report_from_json(type), ParseError);
  json solver = good;
  solver["solver"]["extra"] = 1;
  EXPECT_THROW(report_from_json(solver), ParseError);
  json missing = good;
  missing.erase("period");  // periodic reports must carry their period
  EXPECT_THROW(report_from_json(missing), ParseError);
}

TEST(Json, SolverRoundTrip) {
  SolverConfig cfg;
  cfg.span = 3.5;
  cfg.two_sided = true;
  cfg.max_samples = 1234;
  const SolverConfig back = solver_from_json(solver_to_json(cfg));
  EXPECT_EQ(solver_to_json(back), solver_to_json(cfg));
}

TEST(Grid, Expansion) {
  EXPECT_EQ(expand_grid("1,2,3"), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(expand_grid("0:1:5"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(expand_grid("2,1,2"), (std::vector<double>{2, 1}));
  EXPECT_EQ(expand_grid("3:3:4"), (std::vector<double>{3}));
  EXPECT_THROW(expand_grid(""), ParseError);
  EXPECT_THROW(expand_grid("1:2"), ParseError);
  EXPECT_THROW(expand_grid("1:2:0"), ParseError);
  EXPECT_THROW(expand_grid("a,b"), ParseError);
  EXPECT_THROW(expand_grid("1,inf"), ParseError);
}

TEST(Config, FlatKeysOverrideDefaults) {
  RunConfig cfg;
  apply_config(cfg, json{{"alpha", 2.0}, {"r0", "0.5,1.5"}, {"span", 3.0}, {"two_sided", true}});
  EXPECT_EQ(cfg.alpha, 2.0);
  EXPECT_EQ(cfg.r0s, (std::vector<double>{0.5, 1.5}));
  EXPECT_EQ(cfg.solver.span, 3.0);
  EXPECT_TRUE(cfg.solver.two_sided);
  // later layers win
  apply_config(cfg, json{{"alpha", -1.0}});
  EXPECT_EQ(cfg.alpha, -1.0);
  EXPECT_EQ(cfg.solver.span, 3.0);
}

TEST(Config, RejectsUnknownAndMistypedKeys) {
  RunConfig cfg;
  EXPECT_THROW(apply_config(cfg, json{{"alhpa", 1.0}}), ParseError);
  EXPECT_THROW(apply_config(cfg, json{{"span", "long"}}), ParseError);
  EXPECT_THROW(apply_config(cfg, json::array()), ParseError);
}

TEST(Files, AtomicWriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "catenary_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);  // no temporaries left behind
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_file(dir / "missing"), IoError);
  EXPECT_THROW(write_file_atomic("/nonexistent-dir/x", "y"), IoError);
}
