#include "specforge/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "specforge/error.hpp"

namespace specforge {

namespace {

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* class_color(double label) {
  const auto idx = static_cast<std::size_t>(std::max(0.0, label));
  return kPalette[idx % kPalette.size()];
}

// Blue-to-red ramp for regression values in [lo, hi].
std::string ramp_color(double v, double lo, double hi) {
  const double t = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.5;
  const int r = static_cast<int>(std::lround(40 + 200 * t));
  const int b = static_cast<int>(std::lround(240 - 200 * t));
  std::ostringstream out;
  out << "rgb(" << r << ",80," << b << ")";
  return out.str();
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
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const SpecSet& set, const Dataset& data,
                       const RenderOptions& options) {
  if (set.feature_dim != 2 || data.cols() != 2) {
    throw DataError("rendering needs 2-D data; spec set has " +
                    std::to_string(set.feature_dim) + " features, dataset has " +
                    std::to_string(data.cols()));
  }
  const auto stats = compute_stats(data);
  double x0 = stats.x_min[0];
  double x1 = stats.x_max[0];
  double y0 = stats.x_min[1];
  double y1 = stats.x_max[1];
  const double px = std::max(x1 - x0, 1e-9) * options.margin;
  const double py = std::max(y1 - y0, 1e-9) * options.margin;
  x0 -= px;
  x1 += px;
  y0 -= py;
  y1 += py;

  const double w = options.width;
  const double h = options.height;
  auto sx = [&](double v) { return (std::clamp(v, x0, x1) - x0) / (x1 - x0) * w; };
  auto sy = [&](double v) { return h - (std::clamp(v, y0, y1) - y0) / (y1 - y0) * h; };

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << w << ' ' << h
      << "\">\n";
  if (!options.title.empty()) svg << "<title>" << escape(options.title) << "</title>\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\" stroke=\"black\"/>\n";

  svg << "<g class=\"specs\" fill-opacity=\"0.08\" stroke-width=\"1\">\n";
  for (const auto& spec : set.specs) {
    const auto& lo = spec.input.lower();
    const auto& hi = spec.input.upper();
    const double left = sx(lo[0]);
    const double right = sx(hi[0]);
    const double top = sy(hi[1]);
    const double bottom = sy(lo[1]);
    std::string color;
    if (const auto* c = std::get_if<ClassLabel>(&spec.output)) {
      color = class_color(c->value);
    } else {
      const auto& iv = std::get<Interval>(spec.output);
      color = ramp_color(0.5 * (iv.lo + iv.hi), stats.y_min, stats.y_max);
    }
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
        << std::max(right - left, 0.5) << "\" height=\""
        << std::max(bottom - top, 0.5) << "\" fill=\"" << color << "\" stroke=\""
        << color << "\"><title>" << escape(spec.provenance) << " -> "
        << escape(describe(spec.output)) << "</title></rect>\n";
  }
  svg << "</g>\n<g class=\"points\">\n";
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto r = data.row(i);
    const std::string color = data.task() == TaskKind::Classification
                                  ? class_color(data.label(i))
                                  : ramp_color(data.label(i), stats.y_min, stats.y_max);
    svg << "<circle cx=\"" << sx(r[0]) << "\" cy=\"" << sy(r[1])
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void write_svg(const std::string& svg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << svg;
}

}  // namespace specforge
