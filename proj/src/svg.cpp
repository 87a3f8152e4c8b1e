#include "advlin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "advlin/csv.hpp"

namespace advlin::svg {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo < hi)) {  // degenerate or empty
      const double c = std::isfinite(lo) ? lo : 0.0;
      lo = c - 1.0;
      hi = c + 1.0;
    }
  }
};

std::vector<double> ticks(const Range& r, int count) {
  std::vector<double> out;
  const double raw = (r.hi - r.lo) / count;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  const double first = std::ceil(r.lo / step) * step;
  for (double t = first; t <= r.hi + step * 1e-9; t += step) {
    out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return out;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<Series>& series) {
  Range xr, yr;
  for (const Series& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("svg series with mismatched x/y lengths");
    }
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  xr.pad();
  yr.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double v) {
    return kMarginLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  auto py = [&](double v) {
    return kMarginTop + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title)
      << "</text>\n";

  // Axes + ticks + grid.
  out << "<g stroke=\"black\" fill=\"none\">\n";
  out << "<path d=\"M" << kMarginLeft << " " << kMarginTop << " V"
      << kMarginTop + plot_h << " H" << kMarginLeft + plot_w << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ticks(xr, 6)) {
    const double x = px(t);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kMarginTop + plot_h
        << "\" x2=\"" << num(x) << "\" y2=\"" << kMarginTop + plot_h + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : ticks(yr, 6)) {
    const double y = py(t);
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(y)
        << "\" x2=\"" << kMarginLeft << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(y) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\""
      << kHeight - 12 << "\" text-anchor=\"middle\">" << escape(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";
  out << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (k) out << ' ';
      out << num(px(s.x[k])) << ',' << num(py(s.y[k]));
    }
    out << "\"/>\n";
  }

  // Legend.
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double y = kMarginTop + 8 + 16 * static_cast<double>(i);
    const double x = kMarginLeft + plot_w - 150;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(x + 22) << "\" y2=\"" << num(y) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(x + 28) << "\" y=\"" << num(y + 4) << "\">"
        << escape(series[i].label) << "</text>\n";
  }
  out << "</g>\n";
  out << "</svg>\n";
  atomic_write_text(path, out.str());
}

}  // namespace advlin::svg
