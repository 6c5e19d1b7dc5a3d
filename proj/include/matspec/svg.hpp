#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "matspec/csv.hpp"
#include "matspec/summaries.hpp"

namespace matspec {

namespace detail {

struct Panel {
  double x0, y0, w, h;    // pixel rectangle
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

inline std::string poly_points(const Panel& p, const std::vector<double>& xs, const std::vector<double>& ys) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += format_double(p.px(xs[i])) + "," + format_double(p.py(ys[i])) + " ";
  return s;
}

inline void band(std::ostream& out, const Panel& p, const std::vector<double>& xs,
                 const std::vector<double>& lo, const std::vector<double>& hi, const std::string& fill,
                 double opacity) {
  std::vector<double> xs2(xs.rbegin(), xs.rend()), lo2(lo.rbegin(), lo.rend());
  out << "<polygon points=\"" << poly_points(p, xs, hi) << poly_points(p, xs2, lo2) << "\" fill=\"" << fill
      << "\" fill-opacity=\"" << opacity << "\" stroke=\"none\"/>\n";
}

inline void line(std::ostream& out, const Panel& p, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::string& color, double width) {
  out << "<polyline points=\"" << poly_points(p, xs, ys) << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"" << width << "\"/>\n";
}

}  // namespace detail

// One panel per scalar spectral component: uniform band (light), pointwise
// band (darker), posterior median, optional periodogram overlay in gray and
//, when given, the true spectrum dashed.
inline void write_summary_svg(std::ostream& out, const SpectralSummary& s,
                              const std::vector<Matrix>* periodogram = nullptr,
                              const std::vector<Matrix>* truth = nullptr) {
  const int n_comp = static_cast<int>(s.components.size());
  const int cols = n_comp <= 1 ? 1 : 2;
  const int rows = (n_comp + cols - 1) / cols;
  const double pw = 360, ph = 240, margin = 48;
  const double width = cols * (pw + margin) + margin, height = rows * (ph + margin) + margin;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int c = 0; c < n_comp; ++c) {
    const auto& comp = s.components[c];
    std::vector<double> med, lo, hi, ulo, uhi, per, tr;
    for (std::size_t g = 0; g < s.grid.size(); ++g) {
      med.push_back(s.median(c, static_cast<int>(g)));
      lo.push_back(s.q05(c, static_cast<int>(g)));
      hi.push_back(s.q95(c, static_cast<int>(g)));
      ulo.push_back(s.uniform_lo(c, static_cast<int>(g)));
      uhi.push_back(s.uniform_hi(c, static_cast<int>(g)));
      if (periodogram) per.push_back(comp.extract((*periodogram)[g]));
      if (truth) tr.push_back(comp.extract((*truth)[g]));
    }
    double ymin = *std::min_element(ulo.begin(), ulo.end());
    double ymax = *std::max_element(uhi.begin(), uhi.end());
    for (const auto* extra : {&per, &tr})
      if (!extra->empty()) {
        ymin = std::min(ymin, *std::min_element(extra->begin(), extra->end()));
        ymax = std::max(ymax, *std::max_element(extra->begin(), extra->end()));
      }
    if (!(ymax > ymin)) ymax = ymin + 1.0;

    detail::Panel p{margin + (c % cols) * (pw + margin), margin + (c / cols) * (ph + margin),
                    pw, ph, s.grid.front(), s.grid.back(), ymin, ymax};
    out << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.w << "\" height=\"" << p.h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << p.x0 + 4 << "\" y=\"" << p.y0 - 6 << "\">" << (comp.imag ? "Im " : (comp.i == comp.j ? "" : "Re "))
        << comp.label() << "</text>\n";

    if (periodogram)
      detail::line(out, p, s.grid, per, "#999999", 0.7);
    detail::band(out, p, s.grid, ulo, uhi, "#4477aa", 0.15);
    detail::band(out, p, s.grid, lo, hi, "#4477aa", 0.3);
    detail::line(out, p, s.grid, med, "#4477aa", 1.6);
    if (truth) {
      out << "<polyline points=\"" << detail::poly_points(p, s.grid, tr)
          << "\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"1.2\" stroke-dasharray=\"5,4\"/>\n";
    }
    // axis extents
    out << "<text x=\"" << p.x0 << "\" y=\"" << p.y0 + p.h + 16 << "\">" << format_double(p.xmin)
        << "</text>\n";
    out << "<text x=\"" << p.x0 + p.w - 32 << "\" y=\"" << p.y0 + p.h + 16 << "\">"
        << format_double(p.xmax) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace matspec
