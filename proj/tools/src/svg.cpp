#include "kresling_cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kresling_cli/output.hpp"

namespace kresling::cli {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 50;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = INFINITY;
  double hi = -INFINITY;
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

std::string f(double v) { return format_number(std::round(v * 1000.0) / 1000.0); }

// Linear blend through a short viridis-like ramp.
std::string ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops = {
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double u = t - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + u * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + u * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + u * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series) {
  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    os << "<text x=\"" << f(sx(xv)) << "\" y=\"" << kTop + ph + 16
       << "\" text-anchor=\"middle\">" << tick(xv) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << f(sy(yv) + 4)
       << "\" text-anchor=\"end\">" << tick(yv) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* colour = kPalette[i % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      os << f(sx(s.x[k])) << ',' << f(sy(s.y[k])) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    os << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << kWidth - kRight + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\"";
    if (s.dashed) os << " stroke-dasharray=\"6 4\"";
    os << "/>\n<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << ly << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<HeatCell>& cells,
                    double cell_size) {
  Range xr, yr, vr;
  for (const HeatCell& c : cells) {
    xr.add(c.x);
    yr.add(c.y);
    if (c.has_value) vr.add(c.value);
  }
  xr.pad();
  yr.pad();
  vr.pad();
  const double cols = std::round((xr.hi - xr.lo) / cell_size) + 1;
  const double rows = std::round((yr.hi - yr.lo) / cell_size) + 1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / cols;
  const double ch = ph / rows;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  for (const HeatCell& c : cells) {
    const double col = std::round((c.x - xr.lo) / cell_size);
    const double row = std::round((c.y - yr.lo) / cell_size);
    const double x = kLeft + col * cw;
    const double y = kTop + ph - (row + 1) * ch;
    const std::string fill =
        c.has_value ? ramp((c.value - vr.lo) / (vr.hi - vr.lo)) : std::string("#cccccc");
    os << "<rect x=\"" << f(x) << "\" y=\"" << f(y) << "\" width=\"" << f(cw) << "\" height=\""
       << f(ch) << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    const std::string label = c.has_value ? tick(c.value) : c.tag;
    os << "<text x=\"" << f(x + cw / 2) << "\" y=\"" << f(y + ch / 2 + 4)
       << "\" text-anchor=\"middle\" fill=\"" << (c.has_value ? "white" : "black") << "\">"
       << escape(label) << "</text>\n";
  }
  for (double v = xr.lo; v <= xr.hi + cell_size / 2; v += cell_size) {
    const double col = std::round((v - xr.lo) / cell_size);
    os << "<text x=\"" << f(kLeft + (col + 0.5) * cw) << "\" y=\"" << kTop + ph + 16
       << "\" text-anchor=\"middle\">" << tick(v) << "</text>\n";
  }
  for (double v = yr.lo; v <= yr.hi + cell_size / 2; v += cell_size) {
    const double row = std::round((v - yr.lo) / cell_size);
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << f(kTop + ph - (row + 0.5) * ch + 4)
       << "\" text-anchor=\"end\">" << tick(v) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
     << escape(x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
  const double lx = kWidth - kRight + 30;
  for (int k = 0; k <= 10; ++k) {
    const double y = kTop + ph - ph * k / 10.0;
    os << "<rect x=\"" << lx << "\" y=\"" << f(y - ph / 10.0) << "\" width=\"20\" height=\""
       << f(ph / 10.0) << "\" fill=\"" << ramp(k / 10.0) << "\"/>\n";
  }
  os << "<text x=\"" << lx + 26 << "\" y=\"" << kTop + ph << "\">" << tick(vr.lo) << "</text>\n";
  os << "<text x=\"" << lx + 26 << "\" y=\"" << kTop + 10 << "\">" << tick(vr.hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string crease_pattern_svg(const CreasePattern& pattern) {
  Range xr, yr;
  for (std::size_t i = 0; i < pattern.vertex_count(); ++i) {
    xr.add(pattern.vertex(i).x);
    yr.add(pattern.vertex(i).y);
  }
  xr.pad();
  yr.pad();
  const double margin = 5.0;
  const double w = xr.hi - xr.lo + 2 * margin;
  const double h = yr.hi - yr.lo + 2 * margin;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(w) << "mm\" height=\""
     << format_number(h) << "mm\" viewBox=\"" << format_number(xr.lo - margin) << ' '
     << format_number(-yr.hi - margin) << ' ' << format_number(w) << ' ' << format_number(h)
     << "\">\n";
  // Pattern coordinates are y-up; flip once for the whole drawing.
  os << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.3\">\n";
  auto emit = [&](const char* cls, const char* style, const VertexPair& e) {
    const Point2 a = pattern.vertex(e.first);
    const Point2 b = pattern.vertex(e.second);
    os << "<line class=\"" << cls << "\" " << style << " x1=\"" << format_number(a.x)
       << "\" y1=\"" << format_number(a.y) << "\" x2=\"" << format_number(b.x) << "\" y2=\""
       << format_number(b.y) << "\"/>\n";
  };
  for (const VertexPair& e : pattern.base_edges) emit("edge", "stroke=\"black\"", e);
  for (const VertexPair& e : pattern.mountain_creases) emit("mountain", "stroke=\"#d62728\"", e);
  for (const VertexPair& e : pattern.valley_creases) {
    emit("valley", "stroke=\"#1f77b4\" stroke-dasharray=\"2 1\"", e);
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace kresling::cli
