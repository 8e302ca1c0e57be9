#include "cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace heatlab::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void pad() {
    if (!valid()) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string header(const std::string& title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
                  fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) +
       "</text>\n";
  return s;
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series, bool log_y) {
  auto ty = [log_y](double y) { return log_y ? std::log10(y) : y; };
  auto usable = [log_y](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!log_y || y > 0.0); };
  Range xr;
  Range yr;
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      xr.add(s.x[i]);
      yr.add(ty(s.y[i]));
    }
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string s = header(title);
  s += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    s += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(kTop + ph + 18) + "\" text-anchor=\"middle\">" + tick(fx) +
         "</text>\n";
    const std::string label = log_y ? "1e" + tick(fy) : tick(fy);
    s += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(fy) + 4) + "\" text-anchor=\"end\">" + label +
         "</text>\n";
  }
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 14) + "\" text-anchor=\"middle\">" +
       escape(x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt(kTop + ph / 2) + ")\">" + escape(y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& ser = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    std::string points;
    for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
      if (!usable(ser.x[i], ser.y[i])) continue;
      points += fmt(px(ser.x[i])) + "," + fmt(py(ty(ser.y[i]))) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + points +
         "\"/>\n";
    s += "<text x=\"" + fmt(kLeft + pw - 8) + "\" y=\"" + fmt(kTop + 16 + 14 * k) + "\" text-anchor=\"end\" fill=\"" +
         colour + "\">" + escape(ser.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string classification_strip(const std::string& title, const std::vector<ProbeRow>& probes) {
  Range lr;
  for (const ProbeRow& p : probes) {
    if (p.lambda > 0.0 && std::isfinite(p.lambda)) lr.add(std::log10(p.lambda));
  }
  lr.pad();
  const double pw = kWidth - kLeft - kRight;
  auto px = [&](double lambda) { return kLeft + (std::log10(lambda) - lr.lo) / (lr.hi - lr.lo) * pw; };
  const double y0 = 120.0;
  std::string s = header(title);
  s += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(kLeft + pw) + "\" y2=\"" + fmt(y0) +
       "\" stroke=\"black\"/>\n";
  for (const ProbeRow& p : probes) {
    if (!(p.lambda > 0.0)) continue;
    const char* colour = "#7f7f7f";
    if (p.classification == Classification::blowup) colour = "#d62728";
    if (is_global_side(p.classification)) colour = "#1f77b4";
    s += "<line x1=\"" + fmt(px(p.lambda)) + "\" y1=\"" + fmt(y0 - 30) + "\" x2=\"" + fmt(px(p.lambda)) +
         "\" y2=\"" + fmt(y0 + 30) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = std::pow(10.0, lr.lo + (lr.hi - lr.lo) * i / 4.0);
    s += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(y0 + 50) + "\" text-anchor=\"middle\">" + tick(v) +
         "</text>\n";
  }
  s += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(y0 + 80) +
       "\" text-anchor=\"middle\">lambda (log scale)</text>\n";
  s += "<text x=\"" + fmt(kLeft) + "\" y=\"" + fmt(y0 + 120) +
       "\" fill=\"#d62728\">BLOWUP</text><text x=\"" + fmt(kLeft + 100) + "\" y=\"" + fmt(y0 + 120) +
       "\" fill=\"#1f77b4\">DECAYED / GLOBAL_BOUNDED</text><text x=\"" + fmt(kLeft + 320) + "\" y=\"" +
       fmt(y0 + 120) + "\" fill=\"#7f7f7f\">UNDECIDED</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace heatlab::cli
