// catenary: solve, classify, sweep, phase portraits and the acceptance checks.

#include <algorithm>
#include <cstdlib>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "catenary/acceptance.hpp"
#include "catenary/classify.hpp"
#include "catenary/dynamics.hpp"
#include "catenary/io.hpp"
#include "catenary/svg.hpp"

namespace {

using nlohmann::json;
using namespace catenary;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag values as given on the command line; only flags actually passed are
// layered over the config file.
struct Flags {
  std::string config;
  std::string alpha, alpha_grid, r0, output, format;
  double span = 0, rel_tol = 0, abs_tol = 0, eps_unit = 0, eps_origin = 0, v_max = 0;
  std::size_t max_samples = 0;
  bool two_sided = false;
};

void add_run_flags(CLI::App* cmd, Flags& f, bool grid) {
  cmd->add_option("--config", f.config, "JSON config file (flat keys named like the flags)");
  if (grid) {
    cmd->add_option("--alpha-grid", f.alpha_grid, "alpha values: a,b,c or lo:hi:n");
  } else {
    cmd->add_option("--alpha", f.alpha, "exponent alpha");
  }
  cmd->add_option("--r0", f.r0, "initial radius r(0), or a list a,b,c / grid lo:hi:n");
  cmd->add_option("--output,-o", f.output, "output path (stdout when omitted)");
  cmd->add_option("--span", f.span, "integrate over [-span, span]");
  cmd->add_option("--rel-tol", f.rel_tol, "relative step tolerance");
  cmd->add_option("--abs-tol", f.abs_tol, "absolute step tolerance");
  cmd->add_option("--eps-unit", f.eps_unit, "stop when |r - 1| falls below this");
  cmd->add_option("--eps-origin", f.eps_origin, "stop when r falls below this");
  cmd->add_option("--v-max", f.v_max, "blow-up threshold on |r'| and r");
  cmd->add_option("--max-samples", f.max_samples, "sample budget per run");
  cmd->add_flag("--two-sided", f.two_sided, "integrate both directions for asymmetric runs");
}

RunConfig resolve(const CLI::App* cmd, const Flags& f) {
  json j = json::object();
  if (!f.config.empty()) {
    j = json::parse(read_file(f.config), nullptr, false);
    if (j.is_discarded()) throw ParseError("config: " + f.config + " is not valid JSON");
  }
  auto given = [&](const char* name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (given("--alpha")) j["alpha"] = std::stod(f.alpha);
  if (given("--alpha-grid")) j["alpha_grid"] = f.alpha_grid;
  if (given("--r0")) j["r0"] = f.r0;
  if (given("--output")) j["output"] = f.output;
  if (given("--format")) j["format"] = f.format;
  if (given("--span")) j["span"] = f.span;
  if (given("--rel-tol")) j["rel_tol"] = f.rel_tol;
  if (given("--abs-tol")) j["abs_tol"] = f.abs_tol;
  if (given("--eps-unit")) j["eps_unit"] = f.eps_unit;
  if (given("--eps-origin")) j["eps_origin"] = f.eps_origin;
  if (given("--v-max")) j["v_max"] = f.v_max;
  if (given("--max-samples")) j["max_samples"] = f.max_samples;
  if (given("--two-sided")) j["two_sided"] = f.two_sided;
  RunConfig cfg;
  apply_config(cfg, j);
  return cfg;
}

double require_alpha(const RunConfig& cfg) {
  if (!cfg.alpha) throw UsageError("--alpha is required");
  return *cfg.alpha;
}

void require_r0(const RunConfig& cfg) {
  if (cfg.r0s.empty()) throw UsageError("--r0 is required");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
    spdlog::info("wrote {}", path);
  }
}

std::string stem_of(const std::string& output, const std::string& ext) {
  if (output.size() > ext.size() && output.compare(output.size() - ext.size(), ext.size(), ext) == 0) {
    return output.substr(0, output.size() - ext.size());
  }
  return output;
}

int cmd_solve(const RunConfig& cfg) {
  const PowerParams params(require_alpha(cfg));
  require_r0(cfg);
  if (cfg.format != "csv" && cfg.format != "svg" && cfg.format != "both") {
    throw UsageError("--format must be csv, svg or both");
  }
  const bool multi = cfg.r0s.size() > 1;
  if ((cfg.format != "csv" || multi) && cfg.output.empty()) {
    throw UsageError("--output is required for SVG output or several r0 values");
  }
  const std::string stem = stem_of(stem_of(cfg.output, ".csv"), ".svg");

  std::vector<Trajectory> runs;
  for (double r0 : cfg.r0s) {
    Trajectory t = integrate(params, r0, cfg.solver);
    spdlog::info("[alpha={} r0={}] {} samples, stop {}", params.alpha(), r0, t.samples.size(),
                 to_string(t.stop_reason));
    runs.push_back(std::move(t));
  }
  if (cfg.format != "svg") {
    for (std::size_t i = 0; i < runs.size(); ++i) {
      std::ostringstream csv;
      write_trajectory_csv(csv, runs[i]);
      const std::string path =
          cfg.output.empty() ? "" : multi ? stem + "_" + std::to_string(i) + ".csv" : stem + ".csv";
      emit(path, csv.str());
    }
  }
  if (cfg.format != "csv") emit(stem + ".svg", cartesian_svg(runs));
  return kOk;
}

int cmd_classify(const RunConfig& cfg) {
  const PowerParams params(require_alpha(cfg));
  require_r0(cfg);
  ClassifyConfig cc;
  cc.solver = cfg.solver;
  json out = json::array();
  bool resolved = true;
  for (double r0 : cfg.r0s) {
    const ClassificationReport rep = classify(params, r0, cc);
    spdlog::info("[alpha={} r0={}] {}", params.alpha(), r0, to_string(rep.regime));
    resolved = resolved && rep.regime != Regime::Unresolved;
    out.push_back(report_to_json(rep));
  }
  emit(cfg.output, (out.size() == 1 ? out[0] : out).dump(2) + "\n");
  return resolved ? kOk : kNumerical;
}

struct SweepPoint {
  double alpha, r0;
  std::optional<ClassificationReport> report;
  std::string error;
};

int cmd_sweep(const RunConfig& cfg) {
  std::vector<double> alphas = cfg.alphas;
  if (alphas.empty() && cfg.alpha) alphas.push_back(*cfg.alpha);
  if (alphas.empty()) throw UsageError("--alpha-grid is required");
  require_r0(cfg);
  ClassifyConfig cc;
  cc.solver = cfg.solver;

  std::vector<SweepPoint> points;
  for (double a : alphas) {
    for (double r0 : cfg.r0s) points.push_back({a, r0, std::nullopt, {}});
  }
  // Bounded fan-out: at most `workers` runs in flight.
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < points.size(); begin += workers) {
    const std::size_t end = std::min(points.size(), begin + workers);
    std::vector<std::future<void>> jobs;
    for (std::size_t i = begin; i < end; ++i) {
      jobs.push_back(std::async(std::launch::async, [&p = points[i], &cc] {
        try {
          p.report = classify(PowerParams(p.alpha), p.r0, cc);
          spdlog::info("[alpha={} r0={}] {}", p.alpha, p.r0, to_string(p.report->regime));
        } catch (const std::exception& e) {
          p.error = e.what();
          spdlog::warn("[alpha={} r0={}] failed: {}", p.alpha, p.r0, e.what());
        }
      }));
    }
    for (auto& j : jobs) j.get();
  }

  json out = json::array();
  std::ostringstream table;
  table << "alpha        r0           regime                 stop\n";
  bool ok = true;
  for (const auto& p : points) {
    char line[160];
    if (p.report) {
      out.push_back(report_to_json(*p.report));
      ok = ok && p.report->regime != Regime::Unresolved;
      std::snprintf(line, sizeof line, "%-12g %-12g %-22s %s\n", p.alpha, p.r0,
                    std::string(to_string(p.report->regime)).c_str(),
                    std::string(to_string(p.report->stop_reason)).c_str());
    } else {
      ok = false;
      std::snprintf(line, sizeof line, "%-12g %-12g %-22s %s\n", p.alpha, p.r0, "error", p.error.c_str());
    }
    table << line;
  }
  emit(cfg.output, out.dump(2) + "\n");
  (cfg.output.empty() ? std::cerr : std::cout) << table.str();
  return ok ? kOk : kNumerical;
}

PlotBox parse_box(const std::string& spec) {
  const std::vector<double> v = [&] {
    std::vector<double> out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
  }();
  if (v.size() != 4) throw UsageError("--box expects xmin,xmax,ymin,ymax");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_phase(const RunConfig& cfg, const std::string& box_spec) {
  const PowerParams params(require_alpha(cfg));
  std::vector<double> seeds = cfg.r0s;
  if (seeds.empty()) seeds = expand_grid("0.1:2.9:15");
  const PlotBox box = parse_box(box_spec);
  SolverConfig solver = cfg.solver;
  solver.two_sided = true;
  std::vector<Trajectory> runs;
  for (double r0 : seeds) {
    if (r0 == 1.0) continue;  // the singular circle is not a seed
    runs.push_back(integrate(params, r0, solver));
  }
  emit(cfg.output, phase_svg(params, runs, box));
  return kOk;
}

int cmd_check(const std::string& suite_name) {
  std::vector<int> ids;
  try {
    ids = acceptance::suite(suite_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool ok = true;
  for (int id : ids) {
    const auto r = acceptance::run(id);
    std::cout << acceptance::format(r) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? kOk : kNumerical;
}

void report_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("catenary");
  logger->set_pattern("%^%l%$ %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CATENARY_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Catenaries with respect to the unit circle"};
  app.require_subcommand(1);

  Flags solve_f, classify_f, sweep_f, phase_f;
  auto* solve = app.add_subcommand("solve", "integrate one or more trajectories; CSV and/or SVG");
  add_run_flags(solve, solve_f, false);
  solve->add_option("--format", solve_f.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));

  auto* cls = app.add_subcommand("classify", "classify (alpha, r0) and print JSON reports");
  add_run_flags(cls, classify_f, false);

  auto* sweep = app.add_subcommand("sweep", "classify a grid of (alpha, r0) concurrently");
  add_run_flags(sweep, sweep_f, true);

  auto* phase = app.add_subcommand("phase", "phase portrait in the (r, r') plane as SVG");
  add_run_flags(phase, phase_f, false);
  std::string box = "0,3,-3,3";
  phase->add_option("--box", box, "plot window xmin,xmax,ymin,ymax");

  auto* check = app.add_subcommand("check", "run acceptance criteria");
  std::string suite_name = "all";
  check->add_option("--suite", suite_name, "all, a criterion number, or a suite name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(resolve(solve, solve_f));
    if (*cls) return cmd_classify(resolve(cls, classify_f));
    if (*sweep) return cmd_sweep(resolve(sweep, sweep_f));
    if (*phase) return cmd_phase(resolve(phase, phase_f), box);
    if (*check) return cmd_check(suite_name);
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return kUsage;
  } catch (const ParseError& e) {
    report_error("usage", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    report_error("usage", e.what());
    return kUsage;
  } catch (const IoError& e) {
    report_error("io", e.what());
    return kIo;
  } catch (const std::exception& e) {
    report_error("numerical", e.what());
    return kNumerical;
  }
  return kUsage;
}
