#include "aerodet/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "aerodet/errors.hpp"

namespace aerodet {

namespace {

void write_raw(const std::filesystem::path& path, const char* data, std::size_t size) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  write_raw(path, contents.data(), contents.size());
}

void write_file_atomic(const std::filesystem::path& path, const Bytes& contents) {
  write_raw(path, reinterpret_cast<const char*>(contents.data()), contents.size());
}

std::string format_double(double v) {
  char buf[512];
  const double mag = std::abs(v);
  // Plain decimals for ordinary magnitudes, exponent form at the extremes.
  const auto fmt = (mag == 0.0 || (mag >= 1e-6 && mag < 1e15)) ? std::chars_format::fixed
                                                              : std::chars_format::scientific;
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, fmt);
  return std::string(buf, res.ptr);
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const SvgChart& chart) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto tx = [&](double x) {
    double lo = chart.x_min, hi = chart.x_max;
    if (chart.log_x) {
      x = std::log10(std::max(x, 1e-300));
      lo = std::log10(lo);
      hi = std::log10(hi);
    }
    const double f = hi > lo ? (x - lo) / (hi - lo) : 0.0;
    return kLeft + std::clamp(f, 0.0, 1.0) * plot_w;
  };
  const auto ty = [&](double y) {
    const double f = chart.y_max > chart.y_min ? (y - chart.y_min) / (chart.y_max - chart.y_min) : 0.0;
    return kTop + (1.0 - std::clamp(f, 0.0, 1.0)) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << escape(chart.title) << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    double xv = chart.x_min + f * (chart.x_max - chart.x_min);
    if (chart.log_x)
      xv = std::pow(10.0, std::log10(chart.x_min) +
                              f * (std::log10(chart.x_max) - std::log10(chart.x_min)));
    const double yv = chart.y_min + f * (chart.y_max - chart.y_min);
    const double px = tx(xv);
    const double py = ty(yv);
    os << "<line x1=\"" << fixed(px) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fixed(px)
       << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(px) << "\" y=\"" << kTop + plot_h + 20
       << "\" text-anchor=\"middle\" font-size=\"11\">" << (chart.log_x ? fixed(xv, 3) : fixed(xv))
       << "</text>\n";
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(py) << "\" x2=\"" << kLeft
       << "\" y2=\"" << fixed(py) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(py + 4)
       << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(yv) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << kTop + plot_h / 2 << ")\">" << escape(chart.y_label)
     << "</text>\n";

  std::size_t color = 0;
  for (const auto& s : chart.series) {
    const char* stroke = kPalette[color++ % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) os << ' ';
      os << fixed(tx(s.points[i].first)) << ',' << fixed(ty(s.points[i].second));
    }
    os << "\"/>\n";
    if (!s.label.empty())
      os << "<text x=\"" << kLeft + plot_w - 5 << "\" y=\"" << kTop + 15 * color
         << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << stroke << "\">" << escape(s.label)
         << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace aerodet
