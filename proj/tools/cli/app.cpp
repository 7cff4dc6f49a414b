#include "app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>

#include "aerodet/errors.hpp"
#include "commands.hpp"

namespace aerodet::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) throw UsageError("--sweep expects A..B, got '" + text + "'");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, sep), b = text.substr(sep + 2);
    const int lo = std::stoi(a, &used_a);
    const int hi = std::stoi(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing characters");
    if (lo < 1 || hi < lo) throw UsageError("--sweep range must satisfy 1 <= A <= B");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--sweep expects A..B, got '" + text + "'");
  }
}

// Flags override config values only when given on the command line.
class Overrides {
 public:
  template <typename T>
  void add(CLI::App* cmd, const std::string& name, T ToolConfig::*field, const std::string& help) {
    add_impl<T>(cmd, name, help, [field](ToolConfig& c) -> T& { return c.*field; });
  }
  template <typename T>
  void add(CLI::App* cmd, const std::string& name, std::function<T&(ToolConfig&)> field,
           const std::string& help) {
    add_impl<T>(cmd, name, help, std::move(field));
  }
  void apply(ToolConfig& config) const {
    for (const auto& f : appliers_) f(config);
  }

 private:
  template <typename T>
  void add_impl(CLI::App* cmd, const std::string& name, const std::string& help,
                std::function<T&(ToolConfig&)> field) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = cmd->add_option(name, *value, help);
    appliers_.push_back([opt, value, field](ToolConfig& c) {
      if (opt->count() > 0) field(c) = *value;
    });
  }
  std::vector<std::function<void(ToolConfig&)>> appliers_;
};

void add_bank_flags(CLI::App* cmd, Overrides& o) {
  o.add<int>(cmd, "--num-scales", [](ToolConfig& c) -> int& { return c.bank.num_scales; }, "Number of scales");
  o.add<int>(cmd, "--dirs", [](ToolConfig& c) -> int& { return c.bank.dirs_per_scale; }, "Directions per scale");
  o.add<int>(cmd, "--kernel-size", [](ToolConfig& c) -> int& { return c.bank.kernel_size; }, "Odd kernel side");
  o.add<int>(cmd, "--freq-grid", [](ToolConfig& c) -> int& { return c.bank.freq_grid; }, "Frequency grid side");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shearlet filters, anchor estimation, training dynamics and detection metrics"};
  app.name("aerodet");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  Overrides overrides;
  app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  overrides.add(&app, "--seed", &ToolConfig::seed, "Random seed");
  app.add_option("--out", out_dir, "Output directory");

  auto* bank = app.add_subcommand("bank", "Write the filter bank as JSON and PNG renderings");
  add_bank_flags(bank, overrides);

  std::string image_path;
  auto* decompose = app.add_subcommand("decompose", "Decompose an image into shearlet coefficient planes");
  decompose->add_option("image", image_path, "PNG or binary PGM image")->required();
  add_bank_flags(decompose, overrides);

  std::string gt_path, det_path, sweep_text, loss_path;
  auto* anchors = app.add_subcommand("anchors", "Estimate anchor shapes with IoU k-means");
  anchors->add_option("ground_truth", gt_path, "Ground-truth CSV")->required();
  overrides.add(anchors, "--k", &ToolConfig::k, "Number of anchors");
  overrides.add(anchors, "--restarts", &ToolConfig::restarts, "k-means restarts");
  anchors->add_option("--sweep", sweep_text, "Also sweep k over A..B");

  auto* stats = app.add_subcommand("stats", "Box area and aspect-ratio statistics");
  stats->add_option("ground_truth", gt_path, "Ground-truth CSV")->required();

  auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
  eval->add_option("detections", det_path, "Detections CSV")->required();
  eval->add_option("ground_truth", gt_path, "Ground-truth CSV")->required();
  overrides.add<double>(eval, "--iou", [](ToolConfig& c) -> double& { return c.eval.iou_threshold; }, "IoU threshold");
  overrides.add<double>(eval, "--score-min", [](ToolConfig& c) -> double& { return c.eval.score_min; },
                        "Score cut-off for P/R/F1/accuracy");

  auto* schedule = app.add_subcommand("schedule", "Tabulate the cosine learning-rate schedule");
  overrides.add<double>(schedule, "--eta-min", [](ToolConfig& c) -> double& { return c.schedule.eta_min; }, "Minimum rate");
  overrides.add<double>(schedule, "--eta-max", [](ToolConfig& c) -> double& { return c.schedule.eta_max; }, "Maximum rate");
  overrides.add<double>(schedule, "--total", [](ToolConfig& c) -> double& { return c.schedule.total; }, "Iterations T");

  std::optional<double> sim_total;
  double sim_total_value = 0.0;
  auto* simulate = app.add_subcommand("simulate-train", "Replay a loss log through the augmentation gate");
  simulate->add_option("losses", loss_path, "CSV whose first column holds per-batch losses")->required();
  overrides.add(simulate, "--zeta", &ToolConfig::zeta, "Augmentation threshold");
  auto* sim_total_opt = simulate->add_option("--total", sim_total_value, "Iterations T (default: rows - 1)");

  std::vector<std::string> argv_storage{"aerodet"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    ToolConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    overrides.apply(config);
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (sim_total_opt->count() > 0) sim_total = sim_total_value;

    std::vector<std::filesystem::path> written;
    if (*bank) {
      written = cmd_bank(config, out_dir);
    } else if (*decompose) {
      written = cmd_decompose(image_path, config, out_dir);
    } else if (*anchors) {
      std::optional<std::pair<int, int>> range;
      if (!sweep_text.empty()) range = parse_range(sweep_text);
      written = cmd_anchors(gt_path, config, range, out_dir);
    } else if (*stats) {
      written = cmd_stats(gt_path, out_dir);
    } else if (*eval) {
      written = cmd_eval(det_path, gt_path, config, out_dir, err);
    } else if (*schedule) {
      try {
        written = cmd_schedule(config, out_dir);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (*simulate) {
      if (sim_total && *sim_total <= 0.0) throw UsageError("--total must be positive");
      written = cmd_simulate_train(loss_path, config, sim_total, out_dir);
    }
    out << "wrote " << written.size() << " file(s) to " << out_dir << "\n";
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFormat;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputFormat;
  }
}

}  // namespace aerodet::cli
