#include "uavmag/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "uavmag/metrics.hpp"

namespace uavmag {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  }
};

struct Frame {
  double x0, y0, w, h;
  Range xr, yr;
  [[nodiscard]] double px(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  [[nodiscard]] double py(double y) const { return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h; }
};

void axes(std::ostringstream& o, const Frame& f, const std::string& x_label, const std::string& y_label,
          bool x_ticks = true) {
  o << "<rect x='" << num(f.x0) << "' y='" << num(f.y0) << "' width='" << num(f.w) << "' height='" << num(f.h)
    << "' fill='none' stroke='#444'/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = f.yr.lo + (f.yr.hi - f.yr.lo) * k / 4.0;
    o << "<text x='" << num(f.x0 - 6) << "' y='" << num(f.py(yv) + 4) << "' font-size='11' text-anchor='end'>"
      << tick(yv) << "</text>\n";
    if (!x_ticks) continue;
    const double xv = f.xr.lo + (f.xr.hi - f.xr.lo) * k / 4.0;
    o << "<text x='" << num(f.px(xv)) << "' y='" << num(f.y0 + f.h + 15) << "' font-size='11' text-anchor='middle'>"
      << tick(xv) << "</text>\n";
  }
  if (!x_label.empty())
    o << "<text x='" << num(f.x0 + f.w / 2) << "' y='" << num(f.y0 + f.h + 32)
      << "' font-size='12' text-anchor='middle'>" << escape(x_label) << "</text>\n";
  o << "<text x='" << num(f.x0 - 52) << "' y='" << num(f.y0 + f.h / 2) << "' font-size='12' text-anchor='middle'"
    << " transform='rotate(-90 " << num(f.x0 - 52) << ' ' << num(f.y0 + f.h / 2) << ")'>" << escape(y_label)
    << "</text>\n";
}

std::string header(double w, double h) {
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(w) << "' height='" << num(h) << "' viewBox='0 0 "
    << num(w) << ' ' << num(h) << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
  return o.str();
}

}  // namespace

std::string svg_panels(const std::vector<Series>& panels, double sample_rate, const std::string& y_label,
                       std::size_t max_points) {
  const double width = 900, panel_h = 180, gap = 40, left = 80, top = 30;
  const double height = top + panels.size() * (panel_h + gap) + 30;
  std::ostringstream o;
  o << header(width, height);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& v = panels[p].values;
    Frame f{left, top + p * (panel_h + gap), width - left - 30, panel_h, {}, {}};
    f.xr.add(0.0);
    f.xr.add(v.empty() ? 1.0 : static_cast<double>(v.size() - 1) / sample_rate);
    for (const double y : v) f.yr.add(y);
    f.xr.finish();
    f.yr.finish();
    axes(o, f, p + 1 == panels.size() ? "time (s)" : "", y_label);
    o << "<text x='" << num(f.x0 + 4) << "' y='" << num(f.y0 - 6) << "' font-size='13'>" << escape(panels[p].label)
      << "</text>\n<polyline fill='none' stroke='" << kPalette[p % 6] << "' stroke-width='1' points='";
    const std::size_t buckets = std::max<std::size_t>(1, max_points / 2);
    const std::size_t step = std::max<std::size_t>(1, (v.size() + buckets - 1) / buckets);
    for (std::size_t i = 0; i < v.size(); i += step) {
      const std::size_t end = std::min(v.size(), i + step);
      const auto [mn, mx] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(i),
                                                v.begin() + static_cast<std::ptrdiff_t>(end));
      const double t = static_cast<double>(i) / sample_rate;
      o << num(f.px(t)) << ',' << num(f.py(*mn)) << ' ';
      if (step > 1) o << num(f.px(t)) << ',' << num(f.py(*mx)) << ' ';
    }
    o << "'/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_box_plot(const std::vector<Series>& groups, const std::string& y_label) {
  const double width = 160.0 + 140.0 * groups.size(), height = 420, left = 80, top = 20;
  Frame f{left, top, width - left - 30, height - top - 70, {}, {}};
  f.xr.lo = 0.0;
  f.xr.hi = static_cast<double>(std::max<std::size_t>(1, groups.size()));
  f.yr.add(0.0);
  for (const auto& g : groups)
    for (const double v : g.values) f.yr.add(v);
  f.yr.finish();
  std::ostringstream o;
  o << header(width, height);
  axes(o, f, "", y_label, false);
  auto quantile = [](std::vector<double> s, double q) {
    std::sort(s.begin(), s.end());
    const double pos = q * static_cast<double>(s.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(s.size() - 1, lo + 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double cx = f.px(g + 0.5);
    o << "<text x='" << num(cx) << "' y='" << num(f.y0 + f.h + 18) << "' font-size='11' text-anchor='middle'>"
      << escape(groups[g].label) << " (n=" << groups[g].values.size() << ")</text>\n";
    const auto& v = groups[g].values;
    if (v.empty()) continue;
    const double q1 = quantile(v, 0.25), q2 = median(v), q3 = quantile(v, 0.75);
    const double iqr = q3 - q1;
    double wlo = q1, whi = q3;
    for (const double x : v) {
      if (x >= q1 - 1.5 * iqr) wlo = std::min(wlo, x);
      if (x <= q3 + 1.5 * iqr) whi = std::max(whi, x);
    }
    const double bw = 0.25 * (f.px(1) - f.px(0));
    const char* colour = kPalette[g % 6];
    o << "<line x1='" << num(cx) << "' x2='" << num(cx) << "' y1='" << num(f.py(wlo)) << "' y2='" << num(f.py(whi))
      << "' stroke='#444'/>\n";
    o << "<rect x='" << num(cx - bw) << "' y='" << num(f.py(q3)) << "' width='" << num(2 * bw) << "' height='"
      << num(f.py(q1) - f.py(q3)) << "' fill='" << colour << "' fill-opacity='0.35' stroke='" << colour << "'/>\n";
    o << "<line x1='" << num(cx - bw) << "' x2='" << num(cx + bw) << "' y1='" << num(f.py(q2)) << "' y2='"
      << num(f.py(q2)) << "' stroke='black' stroke-width='2'/>\n";
    for (const double x : v)
      if (x < wlo || x > whi)
        o << "<circle cx='" << num(cx) << "' cy='" << num(f.py(x)) << "' r='2' fill='none' stroke='#444'/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_line_plot(const std::vector<double>& x, const std::vector<Series>& lines, const std::string& x_label,
                          const std::string& y_label) {
  const double width = 760, height = 440, left = 80, top = 20;
  Frame f{left, top, width - left - 190, height - top - 60, {}, {}};
  for (const double v : x) f.xr.add(v);
  for (const auto& l : lines)
    for (const double v : l.values) f.yr.add(v);
  f.xr.finish();
  f.yr.finish();
  std::ostringstream o;
  o << header(width, height);
  axes(o, f, x_label, y_label);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const char* colour = kPalette[k % 6];
    o << "<polyline fill='none' stroke='" << colour << "' stroke-width='2' points='";
    for (std::size_t i = 0; i < x.size() && i < lines[k].values.size(); ++i)
      o << num(f.px(x[i])) << ',' << num(f.py(lines[k].values[i])) << ' ';
    o << "'/>\n";
    const double ly = f.y0 + 16 + 18.0 * k;
    o << "<line x1='" << num(f.x0 + f.w + 14) << "' x2='" << num(f.x0 + f.w + 34) << "' y1='" << num(ly) << "' y2='"
      << num(ly) << "' stroke='" << colour << "' stroke-width='2'/>\n<text x='" << num(f.x0 + f.w + 40) << "' y='"
      << num(ly + 4) << "' font-size='11'>" << escape(lines[k].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace uavmag
