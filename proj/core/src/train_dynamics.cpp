#include "aerodet/train_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace aerodet {

void CosineSchedule::validate() const {
  if (!std::isfinite(eta_min) || !std::isfinite(eta_max) || eta_min > eta_max)
    throw std::invalid_argument("schedule needs finite eta_min <= eta_max");
  if (!(total >= 1.0) || !std::isfinite(total))
    throw std::invalid_argument("schedule length T must be >= 1");
}

double lr_at(const CosineSchedule& schedule, double t_c) {
  schedule.validate();
  if (!(t_c >= 0.0 && t_c <= schedule.total))
    throw std::invalid_argument("iteration " + std::to_string(t_c) + " outside [0, T]");
  return schedule.eta_min + 0.5 * (schedule.eta_max - schedule.eta_min) *
                                (1.0 + std::cos(std::numbers::pi * t_c / schedule.total));
}

double gamma_at(double total, double t_c) { return lr_at({0.0, 1.0, total}, t_c); }

namespace {

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw std::invalid_argument(std::string(name) + " range is not well-ordered");
}

}  // namespace

void AugmentationPolicy::validate() const {
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta must lie in [0, 1]");
  check_range(saturation, "saturation");
  check_range(scale_x, "scale_x");
  check_range(scale_y, "scale_y");
  check_range(rotation_deg, "rotation");
  if (scale_x.lo <= 0.0 || scale_y.lo <= 0.0)
    throw std::invalid_argument("scale ranges must be positive");
}

AugmentationPolicy AugmentationPolicy::transfer_profile() {
  AugmentationPolicy p;
  p.rotation_enabled = true;
  return p;
}

const char* decision_name(const BatchDecision& decision) {
  switch (decision.index()) {
    case 0: return "PassThrough";
    case 1: return "Augment";
    default: return "HardColor";
  }
}

AffineParams sample_affine(const AugmentationPolicy& policy, RandomStream& rng) {
  AffineParams p;
  p.scale_x = rng.uniform(policy.scale_x.lo, policy.scale_x.hi);
  p.scale_y = rng.uniform(policy.scale_y.lo, policy.scale_y.hi);
  p.reflect_x = policy.reflect_x && rng.bernoulli(0.5);
  p.reflect_y = policy.reflect_y && rng.bernoulli(0.5);
  p.rotation_deg =
      policy.rotation_enabled ? rng.uniform(policy.rotation_deg.lo, policy.rotation_deg.hi) : 0.0;
  return p;
}

BatchDecision augment_decide(double gamma_t, bool lambda_hard, double u,
                             const AugmentationPolicy& policy, RandomStream& rng) {
  if (!(gamma_t >= 0.0 && gamma_t <= 1.0)) throw std::invalid_argument("gamma_t must lie in [0, 1]");
  policy.validate();
  if (lambda_hard) return HardColor{rng.uniform(policy.saturation.lo, policy.saturation.hi)};
  if (policy.zeta - gamma_t <= u) return Augment{sample_affine(policy, rng)};
  return PassThrough{};
}

namespace {

// Forward map p' = c + M (p - c) and its inverse.
struct Affine2d {
  double m[2][2];
  double inv[2][2];
  double cx, cy;

  Affine2d(const AffineParams& p, double width, double height) : cx(0.5 * width), cy(0.5 * height) {
    const double sx = p.reflect_x ? -p.scale_x : p.scale_x;
    const double sy = p.reflect_y ? -p.scale_y : p.scale_y;
    const double rad = p.rotation_deg * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    // M = R * diag(sx, sy)
    m[0][0] = c * sx;
    m[0][1] = -s * sy;
    m[1][0] = s * sx;
    m[1][1] = c * sy;
    // M^-1 = diag(1/sx, 1/sy) * R^T
    inv[0][0] = c / sx;
    inv[0][1] = s / sx;
    inv[1][0] = -s / sy;
    inv[1][1] = c / sy;
  }

  std::array<double, 2> forward(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return {cx + m[0][0] * dx + m[0][1] * dy, cy + m[1][0] * dx + m[1][1] * dy};
  }
  std::array<double, 2> backward(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    return {cx + inv[0][0] * dx + inv[0][1] * dy, cy + inv[1][0] * dx + inv[1][1] * dy};
  }
};

constexpr double kMinBoxResidual = 0.25;

}  // namespace

AugmentedSample apply_affine(const Image& image, const std::vector<Box>& boxes,
                             const AffineParams& params) {
  if (!(params.scale_x > 0.0) || !(params.scale_y > 0.0) || !std::isfinite(params.rotation_deg))
    throw std::invalid_argument("affine scales must be positive");

  const int w = image.width();
  const int h = image.height();
  const int ch = image.channels();
  const Affine2d map(params, w, h);

  std::vector<double> px(image.pixels().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto [sx, sy] = map.backward(x + 0.5, y + 0.5);
      const double fx = std::floor(sx), fy = std::floor(sy);
      const bool inside = fx >= 0.0 && fy >= 0.0 && fx < w && fy < h;
      // Uncovered output pixels keep the original pixel at the same spot.
      const int src_x = inside ? static_cast<int>(fx) : x;
      const int src_y = inside ? static_cast<int>(fy) : y;
      for (int c = 0; c < ch; ++c)
        px[(static_cast<std::size_t>(y) * w + x) * ch + c] = image.at(src_x, src_y, c);
    }
  }

  AugmentedSample out{Image(w, h, ch, std::move(px)), {}};
  for (const Box& b : boxes) {
    validate(b);
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& [cx, cy] : {std::array{b.x, b.y}, std::array{b.x + b.w, b.y},
                                 std::array{b.x, b.y + b.h}, std::array{b.x + b.w, b.y + b.h}}) {
      const auto [tx, ty] = map.forward(cx, cy);
      x0 = std::min(x0, tx);
      y0 = std::min(y0, ty);
      x1 = std::max(x1, tx);
      y1 = std::max(y1, ty);
    }
    const double hull_area = (x1 - x0) * (y1 - y0);
    const double kx0 = std::max(x0, 0.0), ky0 = std::max(y0, 0.0);
    const double kx1 = std::min(x1, static_cast<double>(w)), ky1 = std::min(y1, static_cast<double>(h));
    if (kx1 <= kx0 || ky1 <= ky0) continue;
    const Box clipped{kx0, ky0, kx1 - kx0, ky1 - ky0};
    if (clipped.area() < kMinBoxResidual * hull_area) continue;
    out.boxes.push_back(clipped);
  }
  return out;
}

namespace {

struct Hsv {
  double h, s, v;  // h in [0, 6)
};

Hsv rgb_to_hsv(double r, double g, double b) {
  const double v = std::max({r, g, b});
  const double c = v - std::min({r, g, b});
  Hsv out{0.0, v > 0.0 ? c / v : 0.0, v};
  if (c > 0.0) {
    if (v == r) out.h = std::fmod((g - b) / c + 6.0, 6.0);
    else if (v == g) out.h = (b - r) / c + 2.0;
    else out.h = (r - g) / c + 4.0;
  }
  return out;
}

std::array<double, 3> hsv_to_rgb(const Hsv& hsv) {
  const double c = hsv.v * hsv.s;
  const double x = c * (1.0 - std::abs(std::fmod(hsv.h, 2.0) - 1.0));
  const double m = hsv.v - c;
  std::array<double, 3> rgb{};
  switch (static_cast<int>(hsv.h) % 6) {
    case 0: rgb = {c, x, 0.0}; break;
    case 1: rgb = {x, c, 0.0}; break;
    case 2: rgb = {0.0, c, x}; break;
    case 3: rgb = {0.0, x, c}; break;
    case 4: rgb = {x, 0.0, c}; break;
    default: rgb = {c, 0.0, x}; break;
  }
  for (double& v : rgb) v = std::clamp(v + m, 0.0, 1.0);
  return rgb;
}

}  // namespace

Image adjust_saturation(const Image& image, double delta) {
  if (image.channels() != 3) throw std::invalid_argument("adjust_saturation needs a 3-channel image");
  if (!std::isfinite(delta)) throw std::invalid_argument("saturation delta must be finite");
  std::vector<double> px = image.pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    Hsv hsv = rgb_to_hsv(px[i], px[i + 1], px[i + 2]);
    if (hsv.s == 0.0) continue;  // achromatic: hue undefined, stays gray
    hsv.s = std::clamp(hsv.s + delta, 0.0, 1.0);
    const auto rgb = hsv_to_rgb(hsv);
    px[i] = rgb[0];
    px[i + 1] = rgb[1];
    px[i + 2] = rgb[2];
  }
  return Image(image.width(), image.height(), 3, std::move(px));
}

double huber(double y, double y_pred, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("huber delta must be positive");
  const double e = std::abs(y - y_pred);
  if (e <= delta) return 0.5 * e * e;
  return delta * e - 0.5 * delta * delta;
}

namespace {

void check_loss(double v) {
  if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("losses must be finite and >= 0");
}

}  // namespace

MiningState::MiningState(std::vector<double> window) {
  if (window.size() > kLength) throw std::invalid_argument("mining window holds at most 5 losses");
  for (double v : window) check_loss(v);
  window_.assign(window.begin(), window.end());
}

MiningState MiningState::push(double loss) const {
  check_loss(loss);
  MiningState next = *this;
  next.window_.push_back(loss);
  if (next.window_.size() > kLength) next.window_.pop_front();
  return next;
}

bool mining_trigger(const MiningState& state, double current_loss, Deviation deviation) {
  if (!state.full()) return false;
  const auto& w = state.window();
  const double n = static_cast<double>(w.size());
  // Work relative to the oldest loss so an equal-valued window compares exactly.
  const double base = w.front();
  double offset_sum = 0.0;
  for (double v : w) offset_sum += v - base;
  const double mean_offset = offset_sum / n;
  double ss = 0.0;
  for (double v : w) {
    const double d = (v - base) - mean_offset;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (deviation == Deviation::Sample ? n - 1.0 : n));
  return mean_offset + sd <= current_loss - base;
}

std::vector<TrainStep> simulate_training(const std::vector<double>& losses,
                                         const SimulationConfig& config) {
  if (losses.empty()) throw std::invalid_argument("simulate_training: no losses");
  const double total = config.total > 0.0
                           ? config.total
                           : std::max(1.0, static_cast<double>(losses.size()) - 1.0);
  if (static_cast<double>(losses.size()) - 1.0 > total)
    throw std::invalid_argument("schedule length T is shorter than the loss sequence");

  AugmentationPolicy policy;
  policy.zeta = config.zeta;
  policy.validate();

  const RandomStream root(config.seed);
  MiningState state;
  bool hard = false;
  std::vector<TrainStep> steps;
  steps.reserve(losses.size());
  for (std::size_t t = 0; t < losses.size(); ++t) {
    RandomStream rng = root.split(t);
    const double gamma = gamma_at(total, static_cast<double>(t));
    const double u = rng.uniform();
    steps.push_back({static_cast<int>(t), losses[t], gamma, augment_decide(gamma, hard, u, policy, rng)});
    hard = mining_trigger(state, losses[t], config.deviation);
    state = state.push(losses[t]);
  }
  return steps;
}

}  // namespace aerodet
