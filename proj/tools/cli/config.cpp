#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aerodet/errors.hpp"

namespace aerodet::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw InputFormatError("not a valid number: '" + std::string(text) + "'", line);
  return value;
}

bool parse_bool(std::string_view text, std::size_t line) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw InputFormatError("expected true or false, got '" + std::string(text) + "'", line);
}

using Setter = std::function<void(ToolConfig&, std::string_view, std::size_t)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"num_scales", [](ToolConfig& c, auto v, auto l) { c.bank.num_scales = parse_number<int>(v, l); }},
      {"dirs_per_scale", [](ToolConfig& c, auto v, auto l) { c.bank.dirs_per_scale = parse_number<int>(v, l); }},
      {"kernel_size", [](ToolConfig& c, auto v, auto l) { c.bank.kernel_size = parse_number<int>(v, l); }},
      {"freq_grid", [](ToolConfig& c, auto v, auto l) { c.bank.freq_grid = parse_number<int>(v, l); }},
      {"normalize", [](ToolConfig& c, auto v, auto l) { c.bank.normalize = parse_bool(v, l); }},
      {"k", [](ToolConfig& c, auto v, auto l) { c.k = parse_number<int>(v, l); }},
      {"restarts", [](ToolConfig& c, auto v, auto l) { c.restarts = parse_number<int>(v, l); }},
      {"seed", [](ToolConfig& c, auto v, auto l) { c.seed = parse_number<std::uint64_t>(v, l); }},
      {"iou_threshold", [](ToolConfig& c, auto v, auto l) { c.eval.iou_threshold = parse_number<double>(v, l); }},
      {"score_min", [](ToolConfig& c, auto v, auto l) { c.eval.score_min = parse_number<double>(v, l); }},
      {"small_max", [](ToolConfig& c, auto v, auto l) { c.eval.sizes.small_max = parse_number<double>(v, l); }},
      {"medium_max", [](ToolConfig& c, auto v, auto l) { c.eval.sizes.medium_max = parse_number<double>(v, l); }},
      {"fppi_per_image", [](ToolConfig& c, auto v, auto l) { c.eval.fppi_per_image = parse_bool(v, l); }},
      {"interpolation",
       [](ToolConfig& c, std::string_view v, std::size_t l) {
         if (v == "all_point") c.eval.interpolation = ApInterpolation::AllPoint;
         else if (v == "eleven_point") c.eval.interpolation = ApInterpolation::ElevenPoint;
         else throw InputFormatError("interpolation must be all_point or eleven_point", l);
       }},
      {"eta_min", [](ToolConfig& c, auto v, auto l) { c.schedule.eta_min = parse_number<double>(v, l); }},
      {"eta_max", [](ToolConfig& c, auto v, auto l) { c.schedule.eta_max = parse_number<double>(v, l); }},
      {"total", [](ToolConfig& c, auto v, auto l) { c.schedule.total = parse_number<double>(v, l); }},
      {"zeta", [](ToolConfig& c, auto v, auto l) { c.zeta = parse_number<double>(v, l); }},
      {"deviation",
       [](ToolConfig& c, std::string_view v, std::size_t l) {
         if (v == "sample") c.deviation = Deviation::Sample;
         else if (v == "population") c.deviation = Deviation::Population;
         else throw InputFormatError("deviation must be sample or population", l);
       }},
  };
  return table;
}

}  // namespace

void ToolConfig::validate() const {
  bank.validate();
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  eval.validate();
  schedule.validate();
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta must lie in [0, 1]");
}

ToolConfig parse_config(std::istream& in, ToolConfig base) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw InputFormatError("expected key = value", line);
    const auto key = trim(text.substr(0, eq));
    auto value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    const auto it = setters().find(key);
    if (it == setters().end()) throw InputFormatError("unknown key '" + std::string(key) + "'", line);
    it->second(base, value, line);
  }
  return base;
}

ToolConfig load_config(const std::filesystem::path& path, ToolConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  try {
    return parse_config(in, std::move(base));
  } catch (const InputFormatError& e) {
    throw InputFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace aerodet::cli
