#pragma once

// Static SVG figure: trajectories in light grey, every ring arc drawn in its
// ring's color, robots as dots at their t = 0 positions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ringres/angles.hpp"
#include "ringres/analysis.hpp"
#include "ringres/error.hpp"

namespace ringres {

namespace detail {

inline const char* ring_color(int r) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return palette[static_cast<std::size_t>(r) % 10];
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

inline std::string render_svg(const Analysis& a) {
  if (a.scenario.abstract_mode) throw ParameterError("abstract scenarios have no geometry to render");
  constexpr double kScale = 60.0, kMargin = 1.5;
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const Circle& c : a.scenario.circles) {
    minx = std::min(minx, c.x);
    maxx = std::max(maxx, c.x);
    miny = std::min(miny, c.y);
    maxy = std::max(maxy, c.y);
  }
  const double w = (maxx - minx + 2 * kMargin) * kScale;
  const double h = (maxy - miny + 2 * kMargin) * kScale;
  // SVG y grows downwards; flip so counterclockwise stays counterclockwise.
  auto px = [&](double x) { return (x - minx + kMargin) * kScale; };
  auto py = [&](double y) { return (maxy - y + kMargin) * kScale; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(w) << "\" height=\""
     << detail::fmt(h) << "\" viewBox=\"0 0 " << detail::fmt(w) << ' ' << detail::fmt(h) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Circle& c : a.scenario.circles)
    os << "<circle cx=\"" << detail::fmt(px(c.x)) << "\" cy=\"" << detail::fmt(py(c.y)) << "\" r=\""
       << detail::fmt(kScale) << "\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"6\"/>\n";
  for (const Edge& e : a.graph.edges()) {
    const Circle &ci = a.scenario.circles[static_cast<std::size_t>(e.i)],
                 &cj = a.scenario.circles[static_cast<std::size_t>(e.j)];
    os << "<line x1=\"" << detail::fmt(px(ci.x + std::cos(e.phi_ij))) << "\" y1=\""
       << detail::fmt(py(ci.y + std::sin(e.phi_ij))) << "\" x2=\""
       << detail::fmt(px(cj.x + std::cos(e.phi_ji))) << "\" y2=\""
       << detail::fmt(py(cj.y + std::sin(e.phi_ji)))
       << "\" stroke=\"#999999\" stroke-dasharray=\"3,3\"/>\n";
  }

  int ring_base = 0;
  for (const auto& comp : a.components) {
    if (!comp.model) continue;
    for (const Ring& ring : comp.model->rings.rings) {
      const char* color = detail::ring_color(ring_base + ring.id);
      os << "<g stroke=\"" << color << "\" fill=\"none\" stroke-width=\"3\">\n";
      for (const Arc& arc : ring.arcs) {
        const Circle& c = a.scenario.circles[static_cast<std::size_t>(comp.nodes[static_cast<std::size_t>(arc.trajectory)])];
        // Split into pieces below pi so the arc flags stay unambiguous.
        int pieces = static_cast<int>(std::ceil(arc.length / (kPi * 0.9)));
        double step = arc.length / pieces;
        for (int p = 0; p < pieces; ++p) {
          double a0 = arc.start + arc.direction * step * p;
          double a1 = a0 + arc.direction * step;
          os << "<path d=\"M " << detail::fmt(px(c.x + std::cos(a0))) << ' '
             << detail::fmt(py(c.y + std::sin(a0))) << " A " << detail::fmt(kScale) << ' '
             << detail::fmt(kScale) << " 0 0 " << (arc.direction > 0 ? 1 : 0) << ' '
             << detail::fmt(px(c.x + std::cos(a1))) << ' ' << detail::fmt(py(c.y + std::sin(a1)))
             << "\"/>\n";
        }
      }
      os << "</g>\n";
    }
    for (std::size_t k = 0; k < comp.nodes.size(); ++k) {
      const Circle& c = a.scenario.circles[static_cast<std::size_t>(comp.nodes[k])];
      double f = comp.model->schedule.f[k];
      os << "<circle cx=\"" << detail::fmt(px(c.x + std::cos(f))) << "\" cy=\""
         << detail::fmt(py(c.y + std::sin(f))) << "\" r=\"5\" fill=\"black\"/>\n";
      os << "<text x=\"" << detail::fmt(px(c.x)) << "\" y=\"" << detail::fmt(py(c.y))
         << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">" << comp.nodes[k]
         << "</text>\n";
    }
    ring_base += comp.model->rings.size();
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace ringres
