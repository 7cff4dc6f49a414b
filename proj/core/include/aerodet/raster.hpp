#pragma once

#include <cstddef>
#include <vector>

#include "aerodet/shearlet_bank.hpp"

namespace aerodet {

// Pixels in [0, 1], row-major, channel-interleaved. channels is 1 or 3.
class Image {
 public:
  Image() = default;
  // Throws std::invalid_argument on bad dimensions or out-of-range pixels.
  Image(int width, int height, int channels, std::vector<double> pixels);
  static Image filled(int width, int height, int channels, double value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  const std::vector<double>& pixels() const noexcept { return pixels_; }

  double at(int x, int y, int c = 0) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> pixels_;
};

// Single-channel plane of unbounded real values.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0);

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct CoefficientStack {
  ShearletSpec spec;
  // One plane per bank filter, in bank order.
  std::vector<Plane> planes;

  const Plane& at(int scale, int direction) const;
};

Image to_grayscale(const Image& image);

// Plane view of a single-channel image. Throws if channels != 1.
Plane to_plane(const Image& gray);

// Same-size correlation (no kernel flip) with replicate padding.
Plane convolve2d(const Plane& plane, const Kernel& kernel);

CoefficientStack decompose(const Image& image, const FilterBank& bank);

// Root-sum-of-squares over the directions of scale s, min-max rescaled to
// [0, 1]. A flat result maps to all zeros.
Image combine_scale(const CoefficientStack& stack, int s);

// Min-max rescale into [0, 1]; flat input maps to zeros.
Image rescale_to_unit(const Plane& plane);

}  // namespace aerodet
