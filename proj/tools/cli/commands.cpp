#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "aerodet/anchors.hpp"
#include "aerodet/box_io.hpp"
#include "aerodet/errors.hpp"
#include "aerodet/image_io.hpp"
#include "aerodet/output.hpp"
#include "aerodet/raster.hpp"

namespace aerodet::cli {

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

template <typename Rows>
auto read_csv_file(const fs::path& path, Rows reader) {
  auto in = open_input(path);
  try {
    return reader(in);
  } catch (const InputFormatError& e) {
    throw InputFormatError(path.string() + ": " + e.what(), 0);
  }
}

std::string suffix(int s, int d) { return "_s" + std::to_string(s) + "_d" + std::to_string(d); }

Image kernel_image(const Kernel& kernel) {
  Plane p(kernel.size, kernel.size);
  p.values = kernel.weights;
  return rescale_to_unit(p);
}

Image response_image(const MagnitudeGrid& grid) {
  const double peak = *std::max_element(grid.values.begin(), grid.values.end());
  std::vector<double> px(grid.values.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = peak > 0.0 ? grid.values[i] / peak : 0.0;
  return Image(grid.size, grid.size, 1, std::move(px));
}

std::vector<Anchor> shapes_of(const std::vector<GroundTruth>& gts) {
  std::vector<Anchor> shapes;
  shapes.reserve(gts.size());
  for (const auto& g : gts) shapes.push_back(extent_of(g.box));
  return shapes;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<fs::path> cmd_bank(const ToolConfig& config, const fs::path& out_dir) {
  ensure_dir(out_dir);
  const FilterBank bank = build_bank(config.bank);
  std::vector<fs::path> written;
  const auto emit = [&](const fs::path& p, const auto& contents) {
    write_file_atomic(p, contents);
    written.push_back(p);
  };
  emit(out_dir / "bank.json", dump(to_json(bank)));
  for (const auto& f : bank.filters) {
    const auto tag = suffix(f.scale, f.direction);
    emit(out_dir / ("filter" + tag + ".png"), encode_png(kernel_image(f.kernel)));
    emit(out_dir / ("response" + tag + ".png"),
         encode_png(response_image(frequency_response(f, config.bank.freq_grid))));
  }
  return written;
}

std::vector<fs::path> cmd_decompose(const fs::path& image_path, const ToolConfig& config,
                                    const fs::path& out_dir) {
  const Image image = read_image(image_path);
  ensure_dir(out_dir);
  const FilterBank bank = build_bank(config.bank);
  const CoefficientStack stack = decompose(image, bank);
  std::vector<fs::path> written;
  for (int s = 1; s <= config.bank.num_scales; ++s) {
    const auto p = out_dir / ("combined_s" + std::to_string(s) + ".png");
    write_file_atomic(p, encode_png(combine_scale(stack, s)));
    written.push_back(p);
  }
  for (int s = 1; s <= config.bank.num_scales; ++s)
    for (int d = 1; d <= config.bank.dirs_per_scale; ++d) {
      const auto p = out_dir / ("plane" + suffix(s, d) + ".pgm");
      write_file_atomic(p, encode_pgm(rescale_to_unit(stack.at(s, d))));
      written.push_back(p);
    }
  return written;
}

std::vector<fs::path> cmd_anchors(const fs::path& gt_csv, const ToolConfig& config,
                                  std::optional<std::pair<int, int>> sweep_range,
                                  const fs::path& out_dir) {
  const auto gts = read_csv_file(gt_csv, [](std::istream& in) { return read_ground_truth_csv(in); });
  if (gts.empty()) throw InputFormatError(gt_csv.string() + ": no boxes");
  const auto shapes = shapes_of(gts);
  ensure_dir(out_dir);

  std::vector<fs::path> written;
  const auto estimate = kmeans_iou(shapes, config.k, config.seed, config.restarts);
  write_file_atomic(out_dir / "anchors.json", dump(to_json(estimate)));
  written.push_back(out_dir / "anchors.json");

  if (sweep_range) {
    const auto result = sweep(shapes, sweep_range->first, sweep_range->second, config.seed, config.restarts);
    std::string csv = "k,mean_iou\n";
    SvgSeries series{"mean IoU", {}};
    for (const auto& e : result.entries) {
      csv += std::to_string(e.k) + "," + format_double(e.mean_iou) + "\n";
      series.points.emplace_back(e.k, e.mean_iou);
    }
    write_file_atomic(out_dir / "sweep.csv", csv);
    written.push_back(out_dir / "sweep.csv");

    SvgChart chart;
    chart.title = "Number of anchors vs. mean IoU";
    chart.x_label = "k";
    chart.y_label = "mean IoU";
    chart.x_min = sweep_range->first;
    chart.x_max = sweep_range->second;
    chart.series.push_back(std::move(series));
    write_file_atomic(out_dir / "sweep.svg", render_svg(chart));
    written.push_back(out_dir / "sweep.svg");
  }
  return written;
}

std::vector<fs::path> cmd_stats(const fs::path& gt_csv, const fs::path& out_dir) {
  const auto gts = read_csv_file(gt_csv, [](std::istream& in) { return read_ground_truth_csv(in); });
  if (gts.empty()) throw InputFormatError(gt_csv.string() + ": no boxes");
  ensure_dir(out_dir);
  const auto path = out_dir / "stats.json";
  write_file_atomic(path, dump(to_json(box_stats(shapes_of(gts)))));
  return {path};
}

std::vector<fs::path> cmd_eval(const fs::path& det_csv, const fs::path& gt_csv,
                               const ToolConfig& config, const fs::path& out_dir,
                               std::ostream& warnings) {
  const auto dets = read_csv_file(det_csv, [](std::istream& in) { return read_detections_csv(in); });
  const auto gts = read_csv_file(gt_csv, [](std::istream& in) { return read_ground_truth_csv(in); });
  if (gts.empty()) throw InputFormatError(gt_csv.string() + ": no ground-truth boxes");

  std::set<std::string> det_ids, gt_ids;
  for (const auto& d : dets) det_ids.insert(d.image_id);
  for (const auto& g : gts) gt_ids.insert(g.image_id);
  for (const auto& id : det_ids)
    if (!gt_ids.count(id)) warnings << "warning: image '" << id << "' has detections but no ground truth\n";
  for (const auto& id : gt_ids)
    if (!det_ids.count(id)) warnings << "warning: image '" << id << "' has ground truth but no detections\n";

  const EvalReport report = evaluate(dets, gts, config.eval);
  ensure_dir(out_dir);
  std::vector<fs::path> written;
  const auto emit = [&](const fs::path& p, const std::string& contents) {
    write_file_atomic(p, contents);
    written.push_back(p);
  };
  emit(out_dir / "report.json", dump(to_json(report)));

  std::string pr = "recall,precision\n";
  SvgSeries pr_series{"PR", {}};
  for (const auto& p : report.pr.points) {
    pr += format_double(p.recall) + "," + format_double(p.precision) + "\n";
    pr_series.points.emplace_back(p.recall, p.precision);
  }
  emit(out_dir / "pr_curve.csv", pr);

  std::string mr = "fppi,mr\n";
  SvgSeries mr_series{"MR-FPPI", {}};
  for (const auto& p : report.mr_fppi) {
    mr += format_double(p.fppi) + "," + format_double(p.mr) + "\n";
    mr_series.points.emplace_back(std::max(p.fppi, 1e-2), p.mr);
  }
  emit(out_dir / "mr_fppi.csv", mr);

  SvgChart pr_chart;
  pr_chart.title = "Precision-recall";
  pr_chart.x_label = "recall";
  pr_chart.y_label = "precision";
  pr_chart.series.push_back(std::move(pr_series));
  emit(out_dir / "pr_curve.svg", render_svg(pr_chart));

  SvgChart mr_chart;
  mr_chart.title = "Miss rate vs. false positives per image";
  mr_chart.x_label = "FPPI";
  mr_chart.y_label = "miss rate";
  mr_chart.x_min = 1e-2;
  mr_chart.x_max = 1.0;
  mr_chart.log_x = true;
  mr_chart.series.push_back(std::move(mr_series));
  emit(out_dir / "mr_fppi.svg", render_svg(mr_chart));
  return written;
}

std::vector<fs::path> cmd_schedule(const ToolConfig& config, const fs::path& out_dir) {
  const auto& sched = config.schedule;
  sched.validate();
  const double total = sched.total;
  if (total != std::floor(total))
    throw std::invalid_argument("schedule total must be a whole number of iterations");
  ensure_dir(out_dir);
  std::string csv = "t,lr,gamma\n";
  const auto steps = static_cast<long long>(total);
  for (long long t = 0; t <= steps; ++t) {
    const double tc = static_cast<double>(t);
    csv += std::to_string(t) + "," + format_double(lr_at(sched, tc)) + "," +
           format_double(gamma_at(total, tc)) + "\n";
  }
  const auto path = out_dir / "schedule.csv";
  write_file_atomic(path, csv);
  return {path};
}

std::vector<double> read_loss_column(std::istream& in) {
  std::vector<double> losses;
  std::string raw;
  std::size_t line = 0;
  bool first_row = true;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    if (raw.find_first_not_of(" \t") == std::string::npos) continue;
    std::string_view field = std::string_view(raw).substr(0, raw.find(','));
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    const bool numeric = !field.empty() && ec == std::errc() && ptr == end;
    if (!numeric) {
      if (first_row) {
        first_row = false;
        continue;
      }
      throw InputFormatError("invalid loss value '" + std::string(field) + "'", line);
    }
    if (!std::isfinite(value) || value < 0.0)
      throw InputFormatError("loss must be finite and non-negative", line);
    first_row = false;
    losses.push_back(value);
  }
  if (losses.empty()) throw InputFormatError("no loss values");
  return losses;
}

std::vector<fs::path> cmd_simulate_train(const fs::path& loss_csv, const ToolConfig& config,
                                         std::optional<double> total, const fs::path& out_dir) {
  const auto losses = read_csv_file(loss_csv, [](std::istream& in) { return read_loss_column(in); });
  SimulationConfig sim;
  sim.zeta = config.zeta;
  sim.seed = config.seed;
  sim.deviation = config.deviation;
  sim.total = total.value_or(0.0);
  const auto steps = simulate_training(losses, sim);
  ensure_dir(out_dir);
  std::string csv = "t,loss,gamma,decision\n";
  for (const auto& s : steps)
    csv += std::to_string(s.t) + "," + format_double(s.loss) + "," + format_double(s.gamma) + "," +
           decision_name(s.decision) + "\n";
  const auto path = out_dir / "decisions.csv";
  write_file_atomic(path, csv);
  return {path};
}

}  // namespace aerodet::cli
