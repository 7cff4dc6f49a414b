#pragma once

#include <cstdint>
#include <istream>
#include <filesystem>

#include "aerodet/eval.hpp"
#include "aerodet/shearlet_bank.hpp"
#include "aerodet/train_dynamics.hpp"

namespace aerodet::cli {

struct ToolConfig {
  ShearletSpec bank;

  int k = 6;
  int restarts = 10;
  std::uint64_t seed = 42;

  EvalConfig eval;

  CosineSchedule schedule{0.0001, 0.001, 100.0};
  double zeta = 0.7;
  Deviation deviation = Deviation::Sample;

  void validate() const;
};

// key = value lines; '#' starts a comment; unknown keys are rejected.
// Throws InputFormatError naming the offending line.
ToolConfig parse_config(std::istream& in, ToolConfig base = {});
ToolConfig load_config(const std::filesystem::path& path, ToolConfig base = {});

}  // namespace aerodet::cli
