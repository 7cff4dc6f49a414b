#include "aerodet/box_io.hpp"

#include <charconv>
#include <string>
#include <string_view>

#include "aerodet/errors.hpp"
#include "aerodet/output.hpp"

namespace aerodet {
namespace {

constexpr std::string_view kGroundTruthHeader = "image_id,x,y,w,h,class";
constexpr std::string_view kDetectionHeader = "image_id,x,y,w,h,score,class";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, const char* name, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw InputFormatError("invalid " + std::string(name) + " value '" + std::string(field) + "'",
                           line);
  return v;
}

int parse_int(std::string_view field, const char* name, std::size_t line) {
  int v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw InputFormatError("invalid " + std::string(name) + " value '" + std::string(field) + "'",
                           line);
  return v;
}

Box parse_box(const std::vector<std::string_view>& f, std::size_t line) {
  Box b{parse_real(f[1], "x", line), parse_real(f[2], "y", line), parse_real(f[3], "w", line),
        parse_real(f[4], "h", line)};
  try {
    validate(b);
  } catch (const std::invalid_argument& e) {
    throw InputFormatError(e.what(), line);
  }
  return b;
}

// Calls on_row(fields, line_number) for every non-blank data row.
template <typename OnRow>
void read_rows(std::istream& in, std::string_view header, std::size_t columns, OnRow on_row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    if (!seen_header) {
      if (view != header)
        throw InputFormatError("expected header '" + std::string(header) + "'", line_no);
      seen_header = true;
      continue;
    }
    const auto fields = split(view);
    if (fields.size() != columns)
      throw InputFormatError("expected " + std::to_string(columns) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
    if (fields[0].empty()) throw InputFormatError("empty image_id", line_no);
    on_row(fields, line_no);
  }
  if (in.bad()) throw IoError("error reading CSV stream");
  if (!seen_header) throw InputFormatError("missing header '" + std::string(header) + "'");
}

}  // namespace

std::vector<GroundTruth> read_ground_truth_csv(std::istream& in) {
  std::vector<GroundTruth> out;
  read_rows(in, kGroundTruthHeader, 6, [&](const auto& f, std::size_t line) {
    out.push_back({std::string(f[0]), parse_box(f, line), parse_int(f[5], "class", line)});
  });
  return out;
}

std::vector<Detection> read_detections_csv(std::istream& in) {
  std::vector<Detection> out;
  read_rows(in, kDetectionHeader, 7, [&](const auto& f, std::size_t line) {
    const double score = parse_real(f[5], "score", line);
    if (!(score >= 0.0 && score <= 1.0)) throw InputFormatError("score must lie in [0, 1]", line);
    out.push_back({std::string(f[0]), parse_box(f, line), score, parse_int(f[6], "class", line)});
  });
  return out;
}

void write_ground_truth_csv(std::ostream& out, const std::vector<GroundTruth>& gts) {
  out << kGroundTruthHeader << '\n';
  for (const auto& g : gts)
    out << g.image_id << ',' << format_double(g.box.x) << ',' << format_double(g.box.y) << ','
        << format_double(g.box.w) << ',' << format_double(g.box.h) << ',' << g.class_id << '\n';
}

void write_detections_csv(std::ostream& out, const std::vector<Detection>& dets) {
  out << kDetectionHeader << '\n';
  for (const auto& d : dets)
    out << d.image_id << ',' << format_double(d.box.x) << ',' << format_double(d.box.y) << ','
        << format_double(d.box.w) << ',' << format_double(d.box.h) << ','
        << format_double(d.score) << ',' << d.class_id << '\n';
}

}  // namespace aerodet
