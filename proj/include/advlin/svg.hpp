#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace advlin::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal self-contained line plot (axes, ticks, legend, one polyline per
/// series). For human inspection only; nothing downstream parses these.
void write_line_plot(const std::filesystem::path& path,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<Series>& series);

}  // namespace advlin::svg
