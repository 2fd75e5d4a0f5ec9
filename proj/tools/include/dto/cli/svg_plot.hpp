#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dto/controller.hpp"
#include "dto/problem.hpp"
#include "dto/sim.hpp"

namespace dto::cli {

/// Self-contained SVG line chart: axes, ticks, legend, no external assets.
class LinePlot {
 public:
  LinePlot(std::string title, std::string x_label, std::string y_label);

  void add_series(std::string name, std::vector<double> xs, std::vector<double> ys,
                  bool dashed = false);
  void add_vertical_marker(double x, std::string label);
  void add_horizontal_line(double y, std::string label);

  std::string render(int width = 800, int height = 500) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
    bool dashed;
  };
  struct Marker {
    double value;
    std::string label;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  std::vector<Marker> vertical_;
  std::vector<Marker> horizontal_;
};

/// Writes states.svg, constraints.svg and manifold.svg into out_dir and
/// returns their paths. Throws dto::Error on an empty trajectory or an
/// unwritable directory.
std::vector<std::filesystem::path> emit_plots(const Trajectory& trajectory,
                                              const ProblemInstance& instance,
                                              const ControllerGains& gains,
                                              const std::filesystem::path& out_dir);

}  // namespace dto::cli
