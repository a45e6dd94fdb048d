#include "lgbt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace lgbt::svg {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Light gray at 0 to saturated blue at 1.
std::string cell_color(double p) {
  p = std::clamp(p, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(235 - 205 * p));
  const int g = static_cast<int>(std::lround(235 - 135 * p));
  const int b = static_cast<int>(std::lround(235 - 15 * p));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  return colors[i % 6];
}

std::vector<std::string> series_in_order(const std::vector<ExperimentResult>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows)
    if (std::find(names.begin(), names.end(), r.series) == names.end()) names.push_back(r.series);
  return names;
}

}  // namespace

std::string heatmap(const std::vector<ExperimentResult>& rows, const std::string& title) {
  const auto names = series_in_order(rows);
  std::set<std::size_t> as, ds;
  for (const auto& r : rows) {
    as.insert(r.alternatives);
    ds.insert(r.dims);
  }
  const double cell = 36, margin_left = 50, margin_top = 50, gap = 40;
  const double panel_w = cell * static_cast<double>(ds.size());
  const double panel_h = cell * static_cast<double>(as.size());
  const double width = margin_left + names.size() * (panel_w + gap) + 10;
  const double height = margin_top + panel_h + 50;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    const double x0 = margin_left + s * (panel_w + gap);
    os << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << margin_top - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(names[s]) << "</text>\n";
    std::map<std::pair<std::size_t, std::size_t>, const ExperimentResult*> lookup;
    for (const auto& r : rows)
      if (r.series == names[s]) lookup[{r.alternatives, r.dims}] = &r;

    std::size_t row = 0;
    for (auto a : as) {
      std::size_t col = 0;
      const double y = margin_top + row * cell;
      if (s == 0)
        os << "<text x=\"" << margin_left - 6 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">" << a
           << "</text>\n";
      for (auto d : ds) {
        const double x = x0 + col * cell;
        const auto it = lookup.find({a, d});
        if (it != lookup.end()) {
          const double p = it->second->estimate;
          os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
             << "\" fill=\"" << cell_color(p) << "\" stroke=\"white\"/>\n";
          os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 3 << "\" text-anchor=\"middle\" fill=\""
             << (p > 0.6 ? "white" : "black") << "\">" << fmt(p) << "</text>\n";
        }
        ++col;
      }
      ++row;
    }
    std::size_t col = 0;
    for (auto d : ds) {
      os << "<text x=\"" << x0 + col * cell + cell / 2 << "\" y=\"" << margin_top + panel_h + 14
         << "\" text-anchor=\"middle\">" << d << "</text>\n";
      ++col;
    }
    os << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << margin_top + panel_h + 32
       << "\" text-anchor=\"middle\">D</text>\n";
  }
  os << "<text x=\"14\" y=\"" << margin_top + panel_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << margin_top + panel_h / 2 << ")\">A</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string line_chart(const std::vector<ExperimentResult>& rows, XAxis axis, const std::string& title,
                       const std::string& y_label) {
  const auto names = series_in_order(rows);
  auto xval = [axis](const ExperimentResult& r) {
    return static_cast<double>(axis == XAxis::dims ? r.dims : r.comparisons);
  };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymax = 0.0;
  for (const auto& r : rows) {
    xmin = std::min(xmin, xval(r));
    xmax = std::max(xmax, xval(r));
    ymax = std::max(ymax, r.estimate + r.std_error);
  }
  if (rows.empty()) xmin = 0, xmax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax <= 0) ymax = 1;
  ymax *= 1.05;

  const double w = 560, h = 360, left = 60, right = 130, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return top + ph - v / ymax * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = ymax * k / 5.0;
    os << "<line x1=\"" << left - 4 << "\" x2=\"" << left << "\" y1=\"" << py(v) << "\" y2=\"" << py(v)
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << short_num(v)
       << "</text>\n";
  }
  std::set<double> xticks;
  for (const auto& r : rows) xticks.insert(xval(r));
  for (double v : xticks) {
    os << "<line x1=\"" << px(v) << "\" x2=\"" << px(v) << "\" y1=\"" << top + ph << "\" y2=\"" << top + ph + 4
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(v) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << short_num(v)
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">"
     << (axis == XAxis::dims ? "D" : "N") << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t s = 0; s < names.size(); ++s) {
    std::vector<const ExperimentResult*> pts;
    for (const auto& r : rows)
      if (r.series == names[s]) pts.push_back(&r);
    std::sort(pts.begin(), pts.end(), [&](auto* p, auto* q) { return xval(*p) < xval(*q); });
    const char* color = palette(s);
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto* p : pts) os << px(xval(*p)) << ',' << py(p->estimate) << ' ';
    os << "\"/>\n";
    for (auto* p : pts) {
      const double x = px(xval(*p));
      os << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << py(std::max(0.0, p->estimate - p->std_error))
         << "\" y2=\"" << py(p->estimate + p->std_error) << "\" stroke=\"" << color << "\"/>\n";
      os << "<circle cx=\"" << x << "\" cy=\"" << py(p->estimate) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 14 + 16 * s;
    os << "<line x1=\"" << left + pw + 10 << "\" x2=\"" << left + pw + 28 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 32 << "\" y=\"" << ly + 4 << "\">" << escape(names[s]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lgbt::svg
