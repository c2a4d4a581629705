#include "catenary/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace catenary {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f4e9c", "#b8332b", "#2a8c4a", "#8a5a9e", "#c77d1a", "#333333"};
constexpr double kSize = 600.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5g", x);
  return buf;
}

// Maps plot coordinates to the square canvas, y pointing up.
struct Canvas {
  PlotBox box;

  double sx(double x) const { return (x - box.x_min) / (box.x_max - box.x_min) * kSize; }
  double sy(double y) const { return kSize - (y - box.y_min) / (box.y_max - box.y_min) * kSize; }
  bool inside(double x, double y) const {
    return x >= box.x_min && x <= box.x_max && y >= box.y_min && y <= box.y_max;
  }
};

void open_svg(std::ostringstream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Emit one polyline per run of consecutive visible points.
template <class Points>
void polylines(std::ostringstream& out, const Canvas& c, const Points& pts, const char* colour) {
  std::string run;
  std::size_t count = 0;
  auto flush = [&] {
    if (count >= 2) {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << run
          << "\"/>\n";
    }
    run.clear();
    count = 0;
  };
  for (const auto& [x, y] : pts) {
    if (!std::isfinite(x) || !std::isfinite(y) || !c.inside(x, y)) {
      flush();
      continue;
    }
    if (count) run += ' ';
    run += num(c.sx(x)) + "," + num(c.sy(y));
    ++count;
  }
  flush();
}

}  // namespace

std::string cartesian_svg(const std::vector<Trajectory>& curves, double clip) {
  const double extent = std::max(1.2, clip);
  double reach = 1.2;
  for (const auto& t : curves) {
    for (const auto& smp : t.samples) {
      if (smp.r <= clip) reach = std::max(reach, 1.05 * smp.r);
    }
  }
  reach = std::min(reach, extent);
  const Canvas c{{-reach, reach, -reach, reach}};

  std::ostringstream out;
  open_svg(out);
  // axes and the unit circle for reference
  out << "<line x1=\"0\" y1=\"" << num(c.sy(0)) << "\" x2=\"" << kSize << "\" y2=\"" << num(c.sy(0))
      << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  out << "<line x1=\"" << num(c.sx(0)) << "\" y1=\"0\" x2=\"" << num(c.sx(0)) << "\" y2=\"" << kSize
      << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  out << "<circle class=\"unit-circle\" cx=\"" << num(c.sx(0)) << "\" cy=\"" << num(c.sy(0)) << "\" r=\""
      << num(c.sx(1) - c.sx(0)) << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curves[i].samples.size());
    for (const auto& smp : curves[i].samples) {
      pts.emplace_back(smp.r * std::cos(smp.s), smp.r * std::sin(smp.s));
    }
    polylines(out, c, pts, kPalette[i % kPalette.size()]);
  }
  out << "</svg>\n";
  return out.str();
}

std::string phase_svg(const PowerParams& params, const std::vector<Trajectory>& curves, const PlotBox& box) {
  if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min)) {
    throw std::invalid_argument("phase_svg: empty plot box");
  }
  const Canvas c{box};
  std::ostringstream out;
  open_svg(out);
  if (box.y_min < 0 && box.y_max > 0) {
    out << "<line x1=\"0\" y1=\"" << num(c.sy(0)) << "\" x2=\"" << kSize << "\" y2=\"" << num(c.sy(0))
        << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  }
  if (box.x_min < 1 && box.x_max > 1) {
    out << "<line class=\"singular\" x1=\"" << num(c.sx(1)) << "\" y1=\"0\" x2=\"" << num(c.sx(1)) << "\" y2=\""
        << kSize << "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curves[i].samples.size());
    for (const auto& smp : curves[i].samples) {
      pts.emplace_back(smp.r, smp.dr);
    }
    polylines(out, c, pts, kPalette[i % kPalette.size()]);
  }
  if (const auto eq = equilibrium(params); eq && c.inside(eq->point.u, 0.0)) {
    out << "<circle class=\"equilibrium\" cx=\"" << num(c.sx(eq->point.u)) << "\" cy=\"" << num(c.sy(0))
        << "\" r=\"4\" fill=\"" << (eq->kind == EquilibriumKind::Center ? "#2a8c4a" : "#b8332b") << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace catenary
