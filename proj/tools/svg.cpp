#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace crk::cli {

namespace {

constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 50;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

void write_loglog_svg(std::ostream& os, const std::vector<Series>& series,
                      const std::vector<std::pair<double, std::string>>& guides,
                      const std::string& title) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Series& s : series)
    for (auto [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      x0 = std::min(x0, std::log10(x));
      x1 = std::max(x1, std::log10(x));
      y0 = std::min(y0, std::log10(y));
      y1 = std::max(y1, std::log10(y));
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
  auto px = [&](double lx) { return L + (lx - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - y0) / (y1 - y0) * (H - T - B); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
  for (int d = int(x0); d <= int(x1); ++d)
    os << "<line x1=\"" << fmt("%.2f", px(d)) << "\" y1=\"" << T << "\" x2=\"" << fmt("%.2f", px(d))
       << "\" y2=\"" << H - B << "\" stroke=\"#ddd\"/><text x=\"" << fmt("%.2f", px(d)) << "\" y=\""
       << H - B + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  for (int d = int(y0); d <= int(y1); ++d)
    os << "<line x1=\"" << L << "\" y1=\"" << fmt("%.2f", py(d)) << "\" x2=\"" << W - R << "\" y2=\""
       << fmt("%.2f", py(d)) << "\" stroke=\"#ddd\"/><text x=\"" << L - 6 << "\" y=\""
       << fmt("%.2f", py(d) + 4) << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
     << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (W + L - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">ndof</text>\n";

  // guides are clipped by hand to the plot box
  if (!series.empty() && !series[0].points.empty()) {
    const double gx = std::log10(series[0].points.front().first);
    const double gy = std::log10(series[0].points.front().second);
    for (const auto& [slope, color] : guides) {
      double xa = gx, xb = x1;
      const double yb = gy + slope * (xb - gx);
      if (yb < y0) xb = gx + (y0 - gy) / slope;
      os << "<line x1=\"" << fmt("%.2f", px(xa)) << "\" y1=\"" << fmt("%.2f", py(gy)) << "\" x2=\""
         << fmt("%.2f", px(xb)) << "\" y2=\"" << fmt("%.2f", py(gy + slope * (xb - gx)))
         << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,4\"/>\n";
    }
  }
  double ly = T + 16;
  for (const Series& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (auto [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0)) continue;
      os << (first ? "" : " ") << fmt("%.2f,%.2f", px(std::log10(x)), py(std::log10(y)));
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\"" << s.color
       << "\">" << s.label << "</text>\n";
    ly += 16;
  }
  for (const auto& [slope, color] : guides) {
    os << "<text x=\"" << W - R - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\"" << color
       << "\">slope " << fmt("%.4g", slope) << "</text>\n";
    ly += 16;
  }
  os << "</svg>\n";
}

}  // namespace crk::cli
