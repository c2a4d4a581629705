#include "catenary/io.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "catenary/conservation.hpp"
#include "catenary/dynamics.hpp"

namespace catenary {

namespace {

using nlohmann::json;

double parse_double(std::string_view text, std::string_view what) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParseError(std::string(what) + ": cannot parse number '" + std::string(text) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// -- JSON helpers ----------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError("report" + path + ": " + msg);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail(path, "unknown field '" + key + "'");
  }
}

bool present(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

double number_field(const json& j, const char* key, const std::string& path) {
  if (!present(j, key)) fail(path + "." + key, "missing");
  const json& v = j.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& j, const char* key, const std::string& path) {
  if (!present(j, key)) return std::nullopt;
  return number_field(j, key, path);
}

std::string string_field(const json& j, const char* key, const std::string& path) {
  if (!present(j, key)) fail(path + "." + key, "missing");
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const std::set<std::string> kSolverKeys{
    "span",   "rel_tol",         "abs_tol",     "eps_unit",      "eps_origin", "v_max",
    "max_samples", "max_ds",     "sample_fraction", "endgame_gap", "endgame_speed", "endgame_dt",
    "two_sided"};

const std::set<std::string> kReportKeys{"alpha",        "r0",           "regime",
                                        "period",       "extrema",      "blowup_angle",
                                        "orthogonality_defect", "momentum_drift", "angular_extent",
                                        "stop_reason",  "notes",        "solver"};

bool is_orthogonal(Regime r) { return r == Regime::OrthogonalHitConvex || r == Regime::OrthogonalHitConcave; }

std::atomic<unsigned> g_tmp_counter{0};

}  // namespace

std::string format_number(double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::vector<CsvRow> trajectory_rows(const Trajectory& traj) {
  std::vector<CsvRow> rows;
  rows.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) {
    const double ddr = second_derivative(traj.params, smp.radius(), smp.dr);
    rows.push_back({smp.s, smp.r, smp.dr, curvature(smp.r, smp.dr, ddr), momentum(traj.params, smp.radius(), smp.dr),
                    smp.r * std::cos(smp.s), smp.r * std::sin(smp.s)});
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << format_number(row.s) << ',' << format_number(row.r) << ',' << format_number(row.dr) << ','
        << format_number(row.kappa) << ',' << format_number(row.J) << ',' << format_number(row.x) << ','
        << format_number(row.y) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) { write_csv(out, trajectory_rows(traj)); }

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("csv: empty input");
  }
  if (line != kCsvHeader) {
    throw ParseError("csv: expected header '" + std::string(kCsvHeader) + "'");
  }
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    if (line.find('\r') != std::string::npos) {
      throw ParseError("csv: line " + std::to_string(lineno) + ": carriage return (LF line endings required)");
    }
    const auto fields = split(line, ',');
    if (fields.size() != 7) {
      throw ParseError("csv: line " + std::to_string(lineno) + ": expected 7 fields");
    }
    const std::string where = "csv: line " + std::to_string(lineno);
    CsvRow row{};
    double* dst[] = {&row.s, &row.r, &row.dr, &row.kappa, &row.J, &row.x, &row.y};
    for (std::size_t i = 0; i < 7; ++i) {
      *dst[i] = parse_double(fields[i], where);
    }
    rows.push_back(row);
  }
  return rows;
}

json solver_to_json(const SolverConfig& cfg) {
  return json{{"span", cfg.span},
              {"rel_tol", cfg.rel_tol},
              {"abs_tol", cfg.abs_tol},
              {"eps_unit", cfg.eps_unit},
              {"eps_origin", cfg.eps_origin},
              {"v_max", cfg.v_max},
              {"max_samples", cfg.max_samples},
              {"max_ds", cfg.max_ds},
              {"sample_fraction", cfg.sample_fraction},
              {"endgame_gap", cfg.endgame_gap},
              {"endgame_speed", cfg.endgame_speed},
              {"endgame_dt", cfg.endgame_dt},
              {"two_sided", cfg.two_sided}};
}

SolverConfig solver_from_json(const json& j) {
  const std::string path = ".solver";
  require_object(j, path);
  reject_unknown(j, kSolverKeys, path);
  SolverConfig cfg;
  auto positive = [&](const char* key) {
    const double v = number_field(j, key, path);
    if (!(v > 0.0) || !std::isfinite(v)) fail(path + "." + key, "must be positive and finite");
    return v;
  };
  cfg.span = positive("span");
  cfg.rel_tol = positive("rel_tol");
  cfg.abs_tol = positive("abs_tol");
  cfg.eps_unit = positive("eps_unit");
  cfg.eps_origin = positive("eps_origin");
  cfg.v_max = positive("v_max");
  if (!present(j, "max_samples") || !j.at("max_samples").is_number_unsigned()) {
    fail(path + ".max_samples", "expected a non-negative integer");
  }
  cfg.max_samples = j.at("max_samples").get<std::size_t>();
  cfg.max_ds = positive("max_ds");
  cfg.sample_fraction = positive("sample_fraction");
  cfg.endgame_gap = positive("endgame_gap");
  cfg.endgame_speed = positive("endgame_speed");
  cfg.endgame_dt = positive("endgame_dt");
  if (!present(j, "two_sided") || !j.at("two_sided").is_boolean()) {
    fail(path + ".two_sided", "expected a boolean");
  }
  cfg.two_sided = j.at("two_sided").get<bool>();
  return cfg;
}

json report_to_json(const ClassificationReport& report) {
  json j{{"alpha", report.params.alpha()},
         {"r0", report.r0},
         {"regime", std::string(to_string(report.regime))},
         {"momentum_drift", report.conservation_drift},
         {"angular_extent", report.angular_extent},
         {"stop_reason", std::string(to_string(report.stop_reason))},
         {"notes", report.notes},
         {"solver", solver_to_json(report.solver)}};
  if (report.period) j["period"] = *report.period;
  if (report.extrema) j["extrema"] = {report.extrema->first, report.extrema->second};
  if (report.blowup_angle) j["blowup_angle"] = *report.blowup_angle;
  if (report.orthogonality_defect) j["orthogonality_defect"] = *report.orthogonality_defect;
  return j;
}

void validate_report(const json& j) { (void)report_from_json(j); }

ClassificationReport report_from_json(const json& j) {
  const std::string path;
  require_object(j, path);
  reject_unknown(j, kReportKeys, path);

  ClassificationReport rep;
  const double alpha = number_field(j, "alpha", path);
  try {
    rep.params = PowerParams(alpha);
  } catch (const std::invalid_argument& e) {
    fail(".alpha", e.what());
  }
  rep.r0 = number_field(j, "r0", path);
  if (!(rep.r0 > 0.0) || rep.r0 == 1.0 || !std::isfinite(rep.r0)) fail(".r0", "must be positive, finite and not 1");

  const auto regime = regime_from_string(string_field(j, "regime", path));
  if (!regime) fail(".regime", "unknown regime");
  rep.regime = *regime;
  const auto stop = stop_reason_from_string(string_field(j, "stop_reason", path));
  if (!stop) fail(".stop_reason", "unknown stop reason");
  rep.stop_reason = *stop;

  rep.conservation_drift = number_field(j, "momentum_drift", path);
  if (present(j, "angular_extent")) rep.angular_extent = number_field(j, "angular_extent", path);
  if (present(j, "notes")) rep.notes = string_field(j, "notes", path);
  rep.period = optional_number(j, "period", path);
  rep.blowup_angle = optional_number(j, "blowup_angle", path);
  rep.orthogonality_defect = optional_number(j, "orthogonality_defect", path);
  if (present(j, "extrema")) {
    const json& e = j.at("extrema");
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      fail(".extrema", "expected [min, max]");
    }
    rep.extrema = std::make_pair(e[0].get<double>(), e[1].get<double>());
    if (rep.extrema->first > rep.extrema->second) fail(".extrema", "min exceeds max");
  }
  if (!present(j, "solver")) fail(".solver", "missing");
  rep.solver = solver_from_json(j.at("solver"));

  if (rep.period.has_value() != (rep.regime == Regime::PeriodicInner)) {
    fail(".period", "present exactly when regime is PeriodicInner");
  }
  if (rep.blowup_angle.has_value() != (rep.regime == Regime::OuterAsymptotic)) {
    fail(".blowup_angle", "present exactly when regime is OuterAsymptotic");
  }
  if (rep.orthogonality_defect.has_value() != is_orthogonal(rep.regime)) {
    fail(".orthogonality_defect", "present exactly when regime is an orthogonal hit");
  }
  return rep;
}

std::vector<double> expand_grid(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) {
    throw ParseError("grid: empty specification");
  }
  std::vector<double> values;
  const auto colon = split(spec, ':');
  if (colon.size() == 3) {
    const double lo = parse_double(trim(colon[0]), "grid");
    const double hi = parse_double(trim(colon[1]), "grid");
    const std::string_view count_text = trim(colon[2]);
    long n = 0;
    const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), n);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() || n < 1 || n > 100000) {
      throw ParseError("grid: count must be an integer in [1, 100000]");
    }
    for (long i = 0; i < n; ++i) {
      values.push_back(n == 1 ? lo : i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  } else if (colon.size() == 1) {
    for (auto field : split(spec, ',')) {
      values.push_back(parse_double(trim(field), "grid"));
    }
  } else {
    throw ParseError("grid: expected 'a,b,c' or 'lo:hi:n'");
  }
  std::vector<double> out;
  for (double v : values) {
    if (!std::isfinite(v)) throw ParseError("grid: values must be finite");
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

void apply_config(RunConfig& cfg, const json& j) {
  static const std::set<std::string> allowed = [] {
    std::set<std::string> keys = kSolverKeys;
    keys.insert({"alpha", "alpha_grid", "r0", "output", "format"});
    return keys;
  }();
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ParseError("config: unknown key '" + key + "'");
  }
  auto number = [&](const char* key) {
    if (!j.at(key).is_number()) throw ParseError(std::string("config: '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  auto grid = [&](const char* key) {
    const json& v = j.at(key);
    if (v.is_number()) return std::vector<double>{v.get<double>()};
    if (v.is_string()) return expand_grid(v.get<std::string>());
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!x.is_number()) throw ParseError(std::string("config: '") + key + "' entries must be numbers");
        joined += (joined.empty() ? "" : ",") + format_number(x.get<double>());
      }
      if (joined.empty()) throw ParseError(std::string("config: '") + key + "' is empty");
      return expand_grid(joined);
    }
    throw ParseError(std::string("config: '") + key + "' must be a number, string or array");
  };
  if (j.contains("alpha")) cfg.alpha = number("alpha");
  if (j.contains("alpha_grid")) cfg.alphas = grid("alpha_grid");
  if (j.contains("r0")) cfg.r0s = grid("r0");
  SolverConfig& s = cfg.solver;
  const std::pair<const char*, double*> reals[] = {
      {"span", &s.span},       {"rel_tol", &s.rel_tol},     {"abs_tol", &s.abs_tol},
      {"eps_unit", &s.eps_unit}, {"eps_origin", &s.eps_origin}, {"v_max", &s.v_max},
      {"max_ds", &s.max_ds},   {"sample_fraction", &s.sample_fraction}, {"endgame_gap", &s.endgame_gap},
      {"endgame_speed", &s.endgame_speed}, {"endgame_dt", &s.endgame_dt}};
  for (const auto& [key, dst] : reals) {
    if (j.contains(key)) *dst = number(key);
  }
  if (j.contains("max_samples")) {
    if (!j.at("max_samples").is_number_unsigned()) throw ParseError("config: 'max_samples' must be a positive integer");
    s.max_samples = j.at("max_samples").get<std::size_t>();
  }
  if (j.contains("two_sided")) {
    if (!j.at("two_sided").is_boolean()) throw ParseError("config: 'two_sided' must be a boolean");
    s.two_sided = j.at("two_sided").get<bool>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ParseError("config: 'output' must be a string");
    cfg.output = j.at("output").get<std::string>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) throw ParseError("config: 'format' must be a string");
    cfg.format = j.at("format").get<std::string>();
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("config: " + path.string() + ": " + e.what());
  }
  RunConfig cfg;
  apply_config(cfg, j);
  return cfg;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const std::filesystem::path tmp =
      dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
             std::to_string(g_tmp_counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignore;
      std::filesystem::remove(tmp, ignore);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    std::filesystem::remove(tmp, ignore);
    throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed for " + path.string());
  }
  return ss.str();
}

}  // namespace catenary
