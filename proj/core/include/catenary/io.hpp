#pragma once

// Serialization: trajectory CSV, classification reports as JSON, run
// configuration files, and atomic file output.
//
// CSV columns are s, r, dr, kappa, J, x, y with a mandatory header and LF
// line endings; numbers are written with 17 significant digits so that they
// parse back to the same doubles.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "catenary/classify.hpp"
#include "catenary/trajectory.hpp"

namespace catenary {

/// Malformed input: CSV, JSON report or configuration.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader = "s,r,dr,kappa,J,x,y";

struct CsvRow {
  double s, r, dr, kappa, J, x, y;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

/// "%.17g" rendering used for every number in the CSV.
std::string format_number(double x);

std::vector<CsvRow> trajectory_rows(const Trajectory& traj);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
std::vector<CsvRow> read_csv(std::istream& in);

nlohmann::json solver_to_json(const SolverConfig& cfg);
SolverConfig solver_from_json(const nlohmann::json& j);

/// Report with absent optional fields omitted.
nlohmann::json report_to_json(const ClassificationReport& report);

/// Strict: unknown fields, wrong types and inconsistent regime/feature
/// combinations are rejected with ParseError. null is read as absent.
ClassificationReport report_from_json(const nlohmann::json& j);

/// Throws ParseError naming the first violation of the report schema.
void validate_report(const nlohmann::json& j);

/// Command-line run settings. Config files are flat JSON objects whose keys
/// are the long flag names.
struct RunConfig {
  std::optional<double> alpha;
  std::vector<double> alphas;  // expanded alpha grid (sweep)
  std::vector<double> r0s;     // expanded r0 list or grid
  SolverConfig solver;
  std::string output;
  std::string format = "csv";  // csv | svg | both (solve), json (reports)
};

/// "a,b,c" or "lo:hi:n" (n evenly spaced values including both ends).
/// Values are de-duplicated, keeping first occurrences.
std::vector<double> expand_grid(std::string_view spec);

/// Apply a flat JSON config object on top of cfg.
void apply_config(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

/// Write via a temporary file in the same directory and rename over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace catenary
