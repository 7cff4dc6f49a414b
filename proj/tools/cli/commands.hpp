#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "config.hpp"

namespace aerodet::cli {

namespace fs = std::filesystem;

// Each command returns the paths it wrote, in write order.
std::vector<fs::path> cmd_bank(const ToolConfig& config, const fs::path& out_dir);
std::vector<fs::path> cmd_decompose(const fs::path& image_path, const ToolConfig& config,
                                    const fs::path& out_dir);
std::vector<fs::path> cmd_anchors(const fs::path& gt_csv, const ToolConfig& config,
                                  std::optional<std::pair<int, int>> sweep_range,
                                  const fs::path& out_dir);
std::vector<fs::path> cmd_stats(const fs::path& gt_csv, const fs::path& out_dir);
std::vector<fs::path> cmd_eval(const fs::path& det_csv, const fs::path& gt_csv,
                               const ToolConfig& config, const fs::path& out_dir,
                               std::ostream& warnings);
std::vector<fs::path> cmd_schedule(const ToolConfig& config, const fs::path& out_dir);
// Without an explicit total, T is the number of loss rows minus one.
std::vector<fs::path> cmd_simulate_train(const fs::path& loss_csv, const ToolConfig& config,
                                         std::optional<double> total, const fs::path& out_dir);

// First column of a loss CSV; a non-numeric first row is taken as a header.
std::vector<double> read_loss_column(std::istream& in);

}  // namespace aerodet::cli
