#include "dto/cli/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dto/errors.hpp"

namespace dto::cli {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1-2-5 tick spacing giving roughly `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return mag * (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0);
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

LinePlot::LinePlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LinePlot::add_series(std::string name, std::vector<double> xs, std::vector<double> ys,
                          bool dashed) {
  series_.push_back({std::move(name), std::move(xs), std::move(ys), dashed});
}

void LinePlot::add_vertical_marker(double x, std::string label) {
  vertical_.push_back({x, std::move(label)});
}

void LinePlot::add_horizontal_line(double y, std::string label) {
  horizontal_.push_back({y, std::move(label)});
}

std::string LinePlot::render(int width, int height) const {
  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  Range xr, yr;
  for (const Series& s : series_) {
    for (double x : s.xs) xr.include(x);
    for (double y : s.ys) yr.include(y);
  }
  for (const Marker& m : vertical_) xr.include(m.value);
  for (const Marker& m : horizontal_) yr.include(m.value);
  xr.pad();
  yr.pad();

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << xml_escape(title_) << "</text>\n";

  // grid and ticks
  const double xs = nice_step(xr.hi - xr.lo, 8);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi; v += xs) {
    svg << "<line x1=\"" << px(v) << "\" y1=\"" << top << "\" x2=\"" << px(v) << "\" y2=\""
        << top + ph << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << px(v) << "\" y=\"" << top + ph + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(std::abs(v) < xs * 1e-9 ? 0.0 : v)
        << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo, 6);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi; v += ys) {
    svg << "<line x1=\"" << left << "\" y1=\"" << py(v) << "\" x2=\"" << left + pw << "\" y2=\""
        << py(v) << "\" stroke=\"#e0e0e0\"/>\n"
        << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << num(std::abs(v) < ys * 1e-9 ? 0.0 : v)
        << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label_) << "</text>\n"
      << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << top + ph / 2 << ")\">" << xml_escape(y_label_)
      << "</text>\n";

  for (const Marker& m : horizontal_) {
    svg << "<line x1=\"" << left << "\" y1=\"" << py(m.value) << "\" x2=\"" << left + pw
        << "\" y2=\"" << py(m.value) << "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (const Marker& m : vertical_) {
    svg << "<line x1=\"" << px(m.value) << "\" y1=\"" << top << "\" x2=\"" << px(m.value)
        << "\" y2=\"" << top + ph << "\" stroke=\"black\" stroke-dasharray=\"6,3\"/>\n"
        << "<text x=\"" << px(m.value) + 4 << "\" y=\"" << top + 14 << "\" font-size=\"11\">"
        << xml_escape(m.label) << "</text>\n";
  }

  for (std::size_t k = 0; k < series_.size(); ++k) {
    const Series& s = series_[k];
    const char* color = kPalette[k % kPalette.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
    const std::size_t n = std::min(s.xs.size(), s.ys.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.ys[i])) continue;
      svg << num(px(s.xs[i])) << ',' << num(py(s.ys[i])) << ' ';
    }
    svg << "\"/>\n";
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << "/>\n"
        << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << xml_escape(s.name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const Trajectory& traj,
                                              const ProblemInstance& instance,
                                              const ControllerGains& gains,
                                              const std::filesystem::path& out_dir) {
  if (traj.size() == 0) throw Error("cannot plot an empty trajectory");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  LinePlot states("Agent states", "t [s]", "x");
  LinePlot constraints("Constraint margins g(x_i, t) - sigma_i(t)", "t [s]", "margin");
  LinePlot manifold("Sliding manifold max_i ||s_i||_inf", "t [s]", "||s||_inf");

  for (std::size_t i = 0; i < traj.agent_count; ++i) {
    for (std::size_t c = 0; c < traj.dimension; ++c) {
      std::vector<double> ys;
      ys.reserve(traj.size());
      for (const auto& row : traj.records) ys.push_back(row[i].x(static_cast<Eigen::Index>(c)));
      std::string name = "x" + std::to_string(i + 1);
      if (traj.dimension > 1) name += "[" + std::to_string(c + 1) + "]";
      states.add_series(std::move(name), traj.times, std::move(ys));
    }
    const std::size_t q = traj.records.front()[i].margins.size();
    for (std::size_t j = 0; j < q; ++j) {
      std::vector<double> ys;
      ys.reserve(traj.size());
      for (const auto& row : traj.records) ys.push_back(row[i].margins[j]);
      std::string name = "agent " + std::to_string(i + 1);
      if (q > 1) name += " g" + std::to_string(j + 1);
      constraints.add_series(std::move(name), traj.times, std::move(ys));
    }
  }
  for (std::size_t c = 0; c < traj.dimension; ++c) {
    std::vector<double> ys;
    ys.reserve(traj.size());
    for (Seconds t : traj.times) {
      ys.push_back(optimal_trajectory(instance, t)(static_cast<Eigen::Index>(c)));
    }
    states.add_series(traj.dimension > 1 ? "x*[" + std::to_string(c + 1) + "]" : "x*",
                      traj.times, std::move(ys), true);
  }
  constraints.add_horizontal_line(0.0, "0");
  manifold.add_series("max ||s_i||", traj.times, traj.manifold_norm);
  const double td = reaching_time_bound(gains, instance.agent_count(), instance.dimension());
  manifold.add_vertical_marker(td, "T_d = " + num(td) + " s");

  std::vector<std::filesystem::path> written;
  for (const auto& [name, plot] : {std::pair<const char*, const LinePlot*>{"states.svg", &states},
                                   {"constraints.svg", &constraints},
                                   {"manifold.svg", &manifold}}) {
    const std::filesystem::path path = out_dir / name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << plot->render();
    if (!out) throw Error("write to " + path.string() + " failed");
    written.push_back(path);
  }
  return written;
}

}  // namespace dto::cli
