#include "ocular/io/svg_plot.hpp"

#include "ocular/io/trace_csv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace ocular::io {
namespace {

constexpr double kWidth = 900;
constexpr double kPanelHeight = 260;
constexpr double kMarginLeft = 60;
constexpr double kMarginRight = 110;
constexpr double kMarginTop = 40;
constexpr double kGap = 50;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string fmt(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << x;
  return os.str();
}

struct Panel {
  double x0, y0, w, h;
  double t_min, t_max, p_max;

  double x(double t) const { return x0 + (t - t_min) / std::max(t_max - t_min, 1e-9) * w; }
  double y(double px) const { return y0 + px / p_max * h; } // pixel rows grow downward, as in the image
};

void series(std::ostream& os, const Panel& panel, const sim::Trace& trace, Eye eye, bool use_u,
            const char* colour) {
  std::vector<std::string> runs;
  std::string points;
  for (const auto& r : trace) {
    if (r.eye != eye) continue;
    if (!r.valid) {
      if (!points.empty()) runs.push_back(std::move(points));
      points.clear();
      continue;
    }
    const double value = std::clamp(use_u ? r.u : r.v, 0.0, panel.p_max);
    points += fmt(panel.x(r.t)) + "," + fmt(panel.y(value)) + " ";
  }
  if (!points.empty()) runs.push_back(std::move(points));
  for (const auto& run : runs)
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << run << "\"/>\n";
}

}  // namespace

std::string render_trace_svg(const sim::Trace& trace, const CameraModel<double>& camera, const std::string& title) {
  const double t_min = trace.empty() ? 0.0 : trace.front().t;
  const double t_max = trace.empty() ? 1.0 : trace.back().t;
  const double p_max = std::max(camera.width, camera.height);
  const double height = kMarginTop + 2 * kPanelHeight + kGap + 50;
  const double plot_w = kWidth - kMarginLeft - kMarginRight;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << kWidth << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";

  for (Eye eye : kEyes) {
    const double y0 = kMarginTop + (eye == Eye::Left ? 0 : kPanelHeight + kGap);
    const Panel panel{kMarginLeft, y0, plot_w, kPanelHeight, t_min, t_max, p_max};

    os << "<g>\n";
    os << "<rect x=\"" << fmt(panel.x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(plot_w) << "\" height=\""
       << fmt(kPanelHeight) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(panel.x0 + 6) << "\" y=\"" << fmt(y0 + 16) << "\">"
       << (eye == Eye::Left ? "left camera" : "right camera") << "</text>\n";

    for (int k = 0; k <= 4; ++k) {
      const double px = p_max * k / 4;
      os << "<text x=\"" << fmt(panel.x0 - 6) << "\" y=\"" << fmt(panel.y(px) + 4) << "\" text-anchor=\"end\">"
         << static_cast<int>(px) << "</text>\n";
    }
    for (int k = 0; k <= 5; ++k) {
      const double t = t_min + (t_max - t_min) * k / 5;
      os << "<text x=\"" << fmt(panel.x(t)) << "\" y=\"" << fmt(y0 + kPanelHeight + 16)
         << "\" text-anchor=\"middle\">" << format_number(std::round(t * 100) / 100) << "</text>\n";
    }

    const double cu = camera.width / 2, cv = camera.height / 2;
    os << "<line class=\"center\" x1=\"" << fmt(panel.x0) << "\" x2=\"" << fmt(panel.x0 + plot_w) << "\" y1=\""
       << fmt(panel.y(cu)) << "\" y2=\"" << fmt(panel.y(cu)) << "\" stroke=\"#1f77b4\" stroke-dasharray=\"5,4\"/>\n";
    os << "<line class=\"center\" x1=\"" << fmt(panel.x0) << "\" x2=\"" << fmt(panel.x0 + plot_w) << "\" y1=\""
       << fmt(panel.y(cv)) << "\" y2=\"" << fmt(panel.y(cv)) << "\" stroke=\"#d62728\" stroke-dasharray=\"5,4\"/>\n";

    series(os, panel, trace, eye, true, "#1f77b4");
    series(os, panel, trace, eye, false, "#d62728");

    const double lx = panel.x0 + plot_w + 12;
    os << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(y0 + 20) << "\" fill=\"#1f77b4\">X (u, px)</text>\n";
    os << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(y0 + 38) << "\" fill=\"#d62728\">Y (v, px)</text>\n";
    os << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(y0 + 56) << "\" fill=\"gray\">- - centre</text>\n";
    os << "</g>\n";
  }
  os << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(height - 10)
     << "\" text-anchor=\"middle\">time (s)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace ocular::io
