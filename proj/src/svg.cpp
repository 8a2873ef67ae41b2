#include "diamond/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace diamond::svg {
namespace {

constexpr double kRadius = 240.0;
constexpr double kMargin = 30.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Panel {
  double cx;
  double cy;
  bool south;

  // Orthographic view along the axis; the southern panel is mirrored so both
  // read as seen from outside the sphere.
  std::pair<double, double> project(double h, double phi) const {
    const double s = std::sqrt(std::max(0.0, (1.0 - h) * (1.0 + h)));
    const double x = s * std::cos(phi);
    const double y = s * std::sin(phi);
    return {cx + kRadius * (south ? -x : x), cy - kRadius * y};
  }
};

void arc(std::ostringstream& d, const Panel& panel, double h, double from, double to, bool move) {
  const int steps = std::max(2, static_cast<int>(std::ceil(std::abs(to - from) / (2.0 * std::numbers::pi) * 180.0)));
  for (int s = 0; s <= steps; ++s) {
    const auto [x, y] = panel.project(h, from + (to - from) * s / steps);
    d << (move && s == 0 ? "M" : "L") << num(x) << ' ' << num(y) << ' ';
  }
}

// Outline of the part of the region inside the panel's hemisphere, empty
// when the region does not reach it.
std::string outline(const partition::Region& r, const Panel& panel) {
  double lo = r.h_lo.to_double();
  double hi = r.h_hi.to_double();
  if (panel.south) hi = std::min(hi, 0.0);
  else lo = std::max(lo, 0.0);
  if (!(hi > lo)) return {};
  std::ostringstream d;
  const bool full = r.kind == partition::RegionKind::north_cap || r.kind == partition::RegionKind::south_cap || r.divisions == 1;
  if (full) {
    // Disc or annulus in projection.
    const double inner = panel.south ? lo : hi;
    const double outer = panel.south ? hi : lo;
    arc(d, panel, outer, 0.0, 2.0 * std::numbers::pi, true);
    d << "Z ";
    if (std::abs(inner) < 1.0) {
      arc(d, panel, inner, 2.0 * std::numbers::pi, 0.0, true);
      d << "Z ";
    }
    return d.str();
  }
  arc(d, panel, hi, r.phi_lo, r.phi_hi, true);
  arc(d, panel, lo, r.phi_hi, r.phi_lo, false);
  d << "Z";
  return d.str();
}

}  // namespace

std::string render_partition(const partition::Partition& part, const geometry::PointSet<double>& points) {
  if (points.empty()) throw std::invalid_argument("nothing to plot: the point set is empty");
  const double size = 2.0 * kRadius + 2.0 * kMargin;
  const Panel north{kMargin + kRadius, kMargin + kRadius + 20.0, false};
  const Panel south{size + kMargin + kRadius, kMargin + kRadius + 20.0, true};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(2 * size) << "\" height=\"" << num(size + 20.0) << "\" viewBox=\"0 0 "
     << num(2 * size) << ' ' << num(size + 20.0) << "\">\n";
  os << "<style>.region{fill:#f4f1ea;stroke:#555;stroke-width:0.8;fill-rule:evenodd}.point{fill:#c0392b}</style>\n";
  os << "<text x=\"" << num(north.cx) << "\" y=\"18\" text-anchor=\"middle\">north (z &gt;= 0)</text>\n";
  os << "<text x=\"" << num(south.cx) << "\" y=\"18\" text-anchor=\"middle\">south (z &lt;= 0)</text>\n";
  for (const Panel* panel : {&north, &south}) {
    os << "<g class=\"panel\" data-panel=\"" << (panel->south ? "south" : "north") << "\">\n";
    for (std::size_t id = 0; id < part.size(); ++id) {
      const std::string d = outline(part.region(id), *panel);
      if (!d.empty()) os << "<path class=\"region\" data-region=\"" << id << "\" d=\"" << d << "\"/>\n";
    }
    const double dot = std::clamp(kRadius / std::sqrt(static_cast<double>(points.size())) / 4.0, 1.0, 5.0);
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto x = points[k];
      if (panel->south ? x.z() >= 0.0 : x.z() < 0.0) continue;
      const auto [px, py] = panel->project(x.z(), std::atan2(x.y(), x.x()));
      os << "<circle class=\"point\" data-point=\"" << k << "\" cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"" << num(dot) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_scaling(const std::vector<Series>& series, const std::vector<Guide>& guides, const std::string& x_label,
                           const std::string& y_label) {
  double x0 = INFINITY, x1 = -INFINITY, y1 = 0.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.xy) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 >= x0)) throw std::invalid_argument("nothing to plot: no data points");
  for (const auto& g : guides) y1 = std::max(y1, g.y);
  y1 *= 1.1;
  if (x1 == x0) x1 = x0 + 1.0;

  const double w = 720, h = 440, left = 70, right = 170, top = 20, bottom = 50;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto sy = [&](double y) { return h - bottom - y / y1 * (h - top - bottom); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  os << "<line x1=\"" << left << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << num(w - right) << "\" y2=\"" << num(sy(0)) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << num(sy(0)) << "\" x2=\"" << left << "\" y2=\"" << top << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y1 * k / 4.0;
    os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(h - bottom + 16) << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(yv) + 4) << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << num((left + w - right) / 2) << "\" y=\"" << num(h - 10) << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << num((top + h - bottom) / 2) << "\" transform=\"rotate(-90 16 " << num((top + h - bottom) / 2)
     << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (const auto& g : guides) {
    os << "<line class=\"guide\" data-value=\"" << g.y << "\" x1=\"" << left << "\" y1=\"" << num(sy(g.y)) << "\" x2=\"" << num(w - right)
       << "\" y2=\"" << num(sy(g.y)) << "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    os << "<text x=\"" << num(w - right + 6) << "\" y=\"" << num(sy(g.y) + 4) << "\" font-size=\"11\">" << g.label << "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [x, y] : series[k].xy) os << num(sx(x)) << ',' << num(sy(y)) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << num(w - right + 6) << "\" y=\"" << num(top + 14 + 16.0 * k) << "\" font-size=\"11\" fill=\"" << color << "\">"
       << series[k].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace diamond::svg
