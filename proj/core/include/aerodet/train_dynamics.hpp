#pragma once

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include "aerodet/boxes.hpp"
#include "aerodet/random.hpp"
#include "aerodet/raster.hpp"

namespace aerodet {

// Single-cycle cosine annealing from eta_max at t = 0 to eta_min at t = total.
struct CosineSchedule {
  double eta_min = 0.0001;
  double eta_max = 0.001;
  double total = 1.0;

  void validate() const;
};

double lr_at(const CosineSchedule& schedule, double t_c);

// Schedule with bounds [0, 1]; drives the augmentation gate.
double gamma_at(double total, double t_c);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct AugmentationPolicy {
  double zeta = 0.7;
  Range saturation{-0.5, 0.5};
  Range scale_x{0.5, 1.5};
  Range scale_y{0.5, 1.5};
  bool reflect_x = true;
  bool reflect_y = true;
  // Rotation is sampled only under the transfer-learning profile.
  bool rotation_enabled = false;
  Range rotation_deg{-180.0, 180.0};

  void validate() const;

  static AugmentationPolicy detection_profile() { return {}; }
  static AugmentationPolicy transfer_profile();
};

struct AffineParams {
  double scale_x = 1.0;
  double scale_y = 1.0;
  bool reflect_x = false;
  bool reflect_y = false;
  double rotation_deg = 0.0;

  bool operator==(const AffineParams&) const = default;
};

struct PassThrough {
  bool operator==(const PassThrough&) const = default;
};
struct Augment {
  AffineParams params;
  bool operator==(const Augment&) const = default;
};
struct HardColor {
  double saturation_delta = 0.0;
  bool operator==(const HardColor&) const = default;
};

using BatchDecision = std::variant<PassThrough, Augment, HardColor>;

const char* decision_name(const BatchDecision& decision);

AffineParams sample_affine(const AugmentationPolicy& policy, RandomStream& rng);

// HardColor when lambda_hard; otherwise Augment iff zeta - gamma_t <= u.
BatchDecision augment_decide(double gamma_t, bool lambda_hard, double u,
                             const AugmentationPolicy& policy, RandomStream& rng);

struct AugmentedSample {
  Image image;
  std::vector<Box> boxes;
};

// Nearest-neighbour resampling about the image centre; canvas size is kept.
// Output pixels with no source pixel take the original pixel at the same
// position. Boxes map to the hull of their transformed corners, are clipped
// to the canvas, and are dropped when less than 25% of the hull survives.
AugmentedSample apply_affine(const Image& image, const std::vector<Box>& boxes,
                             const AffineParams& params);

// HSV saturation shift, s <- clamp(s + delta, 0, 1). Achromatic pixels are
// returned unchanged. Requires 3 channels.
Image adjust_saturation(const Image& image, double delta);

double huber(double y, double y_pred, double delta = 1.0);

enum class Deviation { Sample, Population };

// Holds the most recent losses, oldest first, at most kLength.
class MiningState {
 public:
  static constexpr std::size_t kLength = 5;

  MiningState() = default;
  explicit MiningState(std::vector<double> window);

  MiningState push(double loss) const;

  const std::deque<double>& window() const noexcept { return window_; }
  bool full() const noexcept { return window_.size() == kLength; }

 private:
  std::deque<double> window_;
};

// mean(window) + stddev(window) <= current_loss. False until the window is full.
bool mining_trigger(const MiningState& state, double current_loss,
                    Deviation deviation = Deviation::Sample);

struct TrainStep {
  int t = 0;
  double loss = 0.0;
  double gamma = 0.0;
  BatchDecision decision;
};

struct SimulationConfig {
  double zeta = 0.7;
  double total = 0.0;  // <= 0 means losses.size() - 1 (at least 1)
  std::uint64_t seed = 0;
  Deviation deviation = Deviation::Sample;
};

// Replays a loss sequence through the gate. The trigger evaluated on loss t
// sets the hard flag for step t + 1. Step t draws from
// RandomStream(seed).split(t).
std::vector<TrainStep> simulate_training(const std::vector<double>& losses,
                                         const SimulationConfig& config);

}  // namespace aerodet
