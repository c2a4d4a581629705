#include "catenary/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "catenary/classify.hpp"
#include "catenary/conservation.hpp"
#include "catenary/dynamics.hpp"
#include "catenary/io.hpp"
#include "catenary/variation.hpp"

namespace catenary::acceptance {

namespace {

// Pinned tolerances.
namespace tol {
constexpr double el_midpoint = 1e-6;
constexpr double momentum = 1e-8;
constexpr double first_integral = 1e-8;
constexpr double extrema = 1e-6;
constexpr double swap = 1e-6;
constexpr double s1_agreement = 1e-4;
constexpr double orthogonality = 1e-3;
constexpr double inversion = 1e-6;
constexpr double stationarity = 1e-6;
constexpr double control_floor = 1e-2;
constexpr double order = 1.9;
}  // namespace tol

struct Pair {
  double alpha;
  double r0;
};

// One or more runs per regime, including the constant solution.
constexpr Pair kResidualPairs[] = {
    {1, 0.25},   {1, 0.5},    {1, 2},     {1, 3},      {2, 0.3},    {2, 2},     {3, 0.2},
    {3, 1.5},    {0.5, 0.4},  {0.5, 1.2}, {-0.5, 0.75}, {-0.5, 1.5}, {-0.5, 3}, {-0.8, 4.9},
    {-0.8, 5.5}, {-1, 0.5},   {-1, 2},    {-2, 0.5},   {-3, 0.25},  {-3, 2},
};

std::string sci(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << x;
  return ss.str();
}

std::string label(double alpha, double r0) {
  std::ostringstream ss;
  ss << "(alpha=" << alpha << ", r0=" << r0 << ")";
  return ss.str();
}

// Collects failures; the criterion passes when there are none.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void info(const std::string& what) { info_.push_back(what); }

  CriterionResult result(int id, std::string title) const {
    CriterionResult r{id, std::move(title), failures_.empty(), {}};
    const auto& lines = failures_.empty() ? info_ : failures_;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      r.detail += (i ? "; " : "") + lines[i];
    }
    return r;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> info_;
};

CriterionResult el_residual_suite() {
  Checker c;
  double worst = 0.0;
  std::size_t checked = 0, unresolved = 0;
  for (const auto& p : kResidualPairs) {
    const Trajectory t = integrate(PowerParams(p.alpha), p.r0);
    const MidpointResidual m = midpoint_el_residuals(t);
    c.expect(m.max_relative <= tol::el_midpoint,
             label(p.alpha, p.r0) + " midpoint residual " + sci(m.max_relative));
    worst = std::max(worst, m.max_relative);
    checked += m.checked;
    unresolved += m.unresolved;
  }
  c.info("max relative residual " + sci(worst) + " over " + std::to_string(checked) + " midpoints (" +
         std::to_string(unresolved) + " unresolvable end intervals skipped)");
  return c.result(1, "EL residual suite");
}

CriterionResult conservation_suite() {
  Checker c;
  double worst_j = 0.0, worst_fi = 0.0;
  for (const auto& p : kResidualPairs) {
    const Trajectory t = integrate(PowerParams(p.alpha), p.r0);
    const double d = momentum_drift(t);
    c.expect(d <= tol::momentum, label(p.alpha, p.r0) + " momentum drift " + sci(d));
    worst_j = std::max(worst_j, d);
  }
  const Pair fi_pairs[] = {{1, 0.25}, {1, 2},  {2, 0.3},  {2, 2},  {3, 0.2},  {3, 1.5},
                           {-1, 0.5}, {-1, 2}, {-2, 0.5}, {-2, 2}, {-3, 0.25}, {-3, 2}};
  for (const auto& p : fi_pairs) {
    const FirstIntegralForm form(static_cast<int>(p.alpha));
    const Trajectory t = integrate(PowerParams(p.alpha), p.r0);
    const double d = first_integral_drift(form, t);
    c.expect(d <= tol::first_integral, label(p.alpha, p.r0) + " first-integral residual " + sci(d));
    worst_fi = std::max(worst_fi, d);
  }
  c.info("momentum drift " + sci(worst_j) + ", first-integral residual " + sci(worst_fi));
  return c.result(2, "Conservation");
}

CriterionResult g_polynomial_suite() {
  Checker c;
  const std::vector<std::int64_t> expected[] = {{0}, {0, 4, -1}, {0, 20, -15, 6, -1}};
  for (int k = 1; k <= 3; ++k) {
    c.expect(g_polynomial(-k) == expected[k - 1], "P(r) mismatch for alpha=" + std::to_string(-k));
  }
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::int64_t> num(1, 400), den(1, 97);
  int points = 0;
  for (int a = -1; a >= -6; --a) {
    const FirstIntegralForm form(a);
    for (int i = 0; i < 20;) {
      const std::int64_t p = num(rng), q = den(rng);
      if (p == q) continue;
      ++i;
      ++points;
      c.expect(g_derivative_matches_exactly(form, p, q),
               "g' mismatch for alpha=" + std::to_string(a) + " at " + std::to_string(p) + "/" + std::to_string(q));
    }
  }
  c.info("P(r) exact for alpha=-1,-2,-3; g' exact at " + std::to_string(points) + " rational points");
  return c.result(3, "g-polynomial exactness");
}

CriterionResult periodic_suite() {
  Checker c;
  const PowerParams params(1.0);
  double worst_ext = 0.0, worst_swap = 0.0;
  for (double r0 : {0.2, 0.25, 0.4}) {
    const ClassificationReport rep = classify(params, r0);
    c.expect(rep.regime == Regime::PeriodicInner,
             label(1, r0) + " classified " + std::string(to_string(rep.regime)) + " " + rep.notes);
    if (!rep.extrema) {
      c.expect(false, label(1, r0) + " no extrema");
      continue;
    }
    const auto [lo, hi] = *rep.extrema;
    const double ext = std::max(std::abs(lo - r0), std::abs(hi - (1.0 - r0)));
    c.expect(ext <= tol::extrema, label(1, r0) + " extrema error " + sci(ext));
    c.expect(lo < 0.5 && 0.5 < hi, label(1, r0) + " extrema do not bracket 1/2");
    const SwapDefect sw = half_period_swap_defect(r0);
    c.expect(sw.defect <= tol::swap, label(1, r0) + " half-period swap defect " + sci(sw.defect));
    c.expect(std::abs(sw.other_extremum - (1.0 - r0)) <= tol::extrema,
             label(1, r0) + " other extremum " + sci(sw.other_extremum));
    worst_ext = std::max(worst_ext, ext);
    worst_swap = std::max(worst_swap, sw.defect);
  }
  c.info("extrema error " + sci(worst_ext) + ", swap defect " + sci(worst_swap));
  return c.result(4, "Periodic inner solutions (alpha=1)");
}

CriterionResult blowup_suite() {
  Checker c;
  double worst_gap = 0.0, largest_s1 = 0.0;
  for (int a : {1, 2, 3}) {
    const PowerParams params(a);
    for (double r0 : {1.5, 2.0, 3.0, 4.0}) {
      const Trajectory t = integrate(params, r0);
      if (t.stop_reason != StopReason::Blowup || !t.limit_s) {
        c.expect(false, label(a, r0) + " stopped with " + std::string(to_string(t.stop_reason)));
        continue;
      }
      const double s1 = asymptote_angle(t);
      c.expect(s1 < std::numbers::pi / 2, label(a, r0) + " s1 = " + std::to_string(s1));
      const double q = domain_bound_quadrature(a, r0).s1;
      c.expect(std::abs(q - s1) <= tol::s1_agreement, label(a, r0) + " quadrature/integration gap " + sci(q - s1));
      bool convex = true;
      for (const auto& smp : t.samples) {
        convex = convex && second_derivative(params, smp.radius(), smp.dr) > 0.0;
      }
      c.expect(convex, label(a, r0) + " r'' not positive everywhere");
      worst_gap = std::max(worst_gap, std::abs(q - s1));
      largest_s1 = std::max(largest_s1, s1);
    }
  }
  c.info("largest s1 " + std::to_string(largest_s1) + ", max quadrature gap " + sci(worst_gap));
  return c.result(5, "Blow-up outside the circle");
}

CriterionResult orthogonal_suite() {
  Checker c;
  const std::pair<Pair, Regime> cases[] = {{{-0.5, 0.75}, Regime::OrthogonalHitConvex},
                                           {{-0.5, 1.5}, Regime::OrthogonalHitConcave},
                                           {{-3, 0.25}, Regime::OrthogonalHitConvex},
                                           {{-3, 2}, Regime::OrthogonalHitConcave}};
  double worst = 0.0;
  for (const auto& [p, expected] : cases) {
    const ClassificationReport rep = classify(PowerParams(p.alpha), p.r0);
    c.expect(rep.stop_reason == StopReason::SingularUnit,
             label(p.alpha, p.r0) + " stopped with " + std::string(to_string(rep.stop_reason)));
    c.expect(rep.regime == expected,
             label(p.alpha, p.r0) + " classified " + std::string(to_string(rep.regime)) + " " + rep.notes);
    const double d = rep.orthogonality_defect.value_or(INFINITY);
    c.expect(d <= tol::orthogonality, label(p.alpha, p.r0) + " orthogonality defect " + sci(d));
    worst = std::max(worst, d);
  }
  c.info("orthogonality defect " + sci(worst));
  return c.result(6, "Orthogonal hits on the circle");
}

CriterionResult inversion_suite() {
  Checker c;
  double worst = 0.0;
  for (double r0 : {2.0, 3.0, 5.0}) {
    const double d = inversion_defect(r0);
    c.expect(d <= tol::inversion, label(-2, r0) + " inversion defect " + sci(d));
    worst = std::max(worst, d);
  }
  c.info("inversion defect " + sci(worst));
  return c.result(7, "Inversion duality (alpha=-2)");
}

CriterionResult equilibrium_suite() {
  Checker c;
  for (double a : {0.5, 1.0, 3.0}) {
    const auto eq = equilibrium(PowerParams(a));
    c.expect(eq && eq->kind == EquilibriumKind::Center, "alpha=" + std::to_string(a) + " not a center");
  }
  for (double a : {-0.25, -0.5, -0.75}) {
    const auto eq = equilibrium(PowerParams(a));
    c.expect(eq && eq->kind == EquilibriumKind::Saddle, "alpha=" + std::to_string(a) + " not a saddle");
  }
  for (double a : {-1.0, -2.0}) {
    c.expect(!equilibrium(PowerParams(a)), "alpha=" + std::to_string(a) + " has an equilibrium");
  }
  const auto one = equilibrium(PowerParams(1.0));
  const std::array<std::array<double, 2>, 2> jac{{{0.0, 1.0}, {-2.0, 0.0}}};
  c.expect(one && one->jacobian == jac, "alpha=1 jacobian differs from [[0,1],[-2,0]]");
  c.info("centers for alpha>0, saddles for -1<alpha<0, none for alpha<=-1");
  return c.result(8, "Equilibrium dichotomy");
}

CriterionResult stationarity_suite() {
  Checker c;
  const PowerParams params(1.0);
  const Trajectory t = integrate(params, 0.25);
  const double T = period(t);
  const BumpBasis basis = BumpBasis::centred(-0.5 * T, 0.5 * T);
  const double h = default_step(t, -0.5 * T, 0.5 * T);
  const double d = stationarity_defect(params, t, basis, h);
  c.expect(d <= tol::stationarity, "solution defect " + sci(d));

  const CurveFn control = [](double) { return CurvePoint{Radius::from_r(0.6), 0.0}; };
  const double dc = stationarity_defect(params, control, basis, h);
  c.expect(dc >= tol::control_floor, "control defect " + sci(dc));

  const ConvergenceFit fit = defect_convergence(params, t, basis, {1e-2, 1e-3, 1e-4});
  c.expect(fit.order >= tol::order, "observed order " + std::to_string(fit.order));
  c.info("solution " + sci(d) + ", control " + sci(dc) + ", order " + std::to_string(fit.order));
  return c.result(9, "Stationarity under bump variations");
}

CriterionResult limit_suite() {
  Checker c;
  const double d2 = segment_hausdorff_distance(1e-2);
  const double d3 = segment_hausdorff_distance(1e-3);
  c.expect(d3 < d2, "distance did not decrease: " + sci(d2) + " -> " + sci(d3));
  c.info("Hausdorff distance " + sci(d2) + " (r0=1e-2) -> " + sci(d3) + " (r0=1e-3)");
  return c.result(10, "Limit trend towards the doubled segment");
}

CriterionResult io_suite() {
  Checker c;
  for (const auto& p : {Pair{1, 0.25}, Pair{-0.5, 0.75}, Pair{2, 2}}) {
    const Trajectory t = integrate(PowerParams(p.alpha), p.r0);
    std::ostringstream first;
    write_trajectory_csv(first, t);
    std::istringstream in(first.str());
    const auto rows = read_csv(in);
    c.expect(rows == trajectory_rows(t), label(p.alpha, p.r0) + " CSV values differ after parsing");
    std::ostringstream second;
    write_csv(second, rows);
    c.expect(first.str() == second.str(), label(p.alpha, p.r0) + " CSV text differs after round trip");
  }
  for (const auto& p : {Pair{1, 0.25}, Pair{1, 2}, Pair{-3, 2}, Pair{1, 0.5}}) {
    const ClassificationReport rep = classify(PowerParams(p.alpha), p.r0);
    const std::string text = report_to_json(rep).dump();
    const ClassificationReport back = report_from_json(nlohmann::json::parse(text));
    c.expect(report_to_json(back).dump() == text, label(p.alpha, p.r0) + " JSON differs after round trip");
  }
  auto bad = report_to_json(classify(PowerParams(1.0), 0.25));
  bad["unexpected"] = 1;
  bool rejected = false;
  try {
    validate_report(bad);
  } catch (const ParseError&) {
    rejected = true;
  }
  c.expect(rejected, "unknown JSON field accepted");
  c.info("CSV and JSON round trips bit-exact; unknown fields rejected");
  return c.result(11, "Serialization round trips");
}

struct Entry {
  int id;
  const char* name;
  std::function<CriterionResult()> fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {1, "el", el_residual_suite},          {2, "conservation", conservation_suite},
      {3, "gpoly", g_polynomial_suite},      {4, "periodic", periodic_suite},
      {5, "blowup", blowup_suite},           {6, "orthogonal", orthogonal_suite},
      {7, "inversion", inversion_suite},     {8, "equilibrium", equilibrium_suite},
      {9, "stationarity", stationarity_suite}, {10, "limit", limit_suite},
      {11, "io", io_suite},
  };
  return entries;
}

}  // namespace

std::vector<int> suite(std::string_view name) {
  if (name == "all") {
    std::vector<int> ids;
    for (const auto& e : registry()) ids.push_back(e.id);
    return ids;
  }
  for (const auto& e : registry()) {
    if (name == e.name || name == std::to_string(e.id)) return {e.id};
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

CriterionResult run(int id) {
  for (const auto& e : registry()) {
    if (e.id != id) continue;
    try {
      return e.fn();
    } catch (const std::exception& ex) {
      return {id, e.name, false, std::string("exception: ") + ex.what()};
    }
  }
  throw std::invalid_argument("unknown criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_all(const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(run(id));
  return out;
}

std::string format(const CriterionResult& r) {
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.detail;
}

}  // namespace catenary::acceptance
