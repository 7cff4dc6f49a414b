#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aerodet/image_io.hpp"

namespace aerodet {

// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, const Bytes& contents);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  bool log_x = false;
  std::vector<SvgSeries> series;
};

// Minimal line chart: axes, five ticks per axis, one polyline per series.
std::string render_svg(const SvgChart& chart);

}  // namespace aerodet
