#include "aerodet/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aerodet {

Image::Image(int width, int height, int channels, std::vector<double> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw std::invalid_argument("Image: dimensions must be >= 1");
  if (channels != 1 && channels != 3) throw std::invalid_argument("Image: channels must be 1 or 3");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * channels)
    throw std::invalid_argument("Image: pixel count does not match dimensions");
  for (double v : pixels_)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw std::invalid_argument("Image: pixel values must lie in [0, 1]");
}

Image Image::filled(int width, int height, int channels, double value) {
  return Image(width, height, channels,
               std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                       std::max(height, 0) * std::max(channels, 0),
                                   value));
}

Plane::Plane(int w, int h, double fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

const Plane& CoefficientStack::at(int scale, int direction) const {
  if (scale < 1 || scale > spec.num_scales || direction < 1 || direction > spec.dirs_per_scale)
    throw std::invalid_argument("CoefficientStack::at: index out of range");
  return planes[static_cast<std::size_t>(scale - 1) * spec.dirs_per_scale + (direction - 1)];
}

Image to_grayscale(const Image& image) {
  if (image.channels() == 1) return image;
  std::vector<double> gray(static_cast<std::size_t>(image.width()) * image.height());
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double v = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
    gray[i] = std::clamp(v, 0.0, 1.0);
  }
  return Image(image.width(), image.height(), 1, std::move(gray));
}

Plane to_plane(const Image& gray) {
  if (gray.channels() != 1) throw std::invalid_argument("to_plane: expected a 1-channel image");
  Plane p;
  p.width = gray.width();
  p.height = gray.height();
  p.values = gray.pixels();
  return p;
}

Plane convolve2d(const Plane& plane, const Kernel& kernel) {
  if (kernel.size < 1 || kernel.size % 2 == 0)
    throw std::invalid_argument("convolve2d: kernel size must be odd, got " +
                                std::to_string(kernel.size));
  if (kernel.weights.size() != static_cast<std::size_t>(kernel.size) * kernel.size)
    throw std::invalid_argument("convolve2d: kernel weight count mismatch");
  if (plane.width < 1 || plane.height < 1)
    throw std::invalid_argument("convolve2d: empty plane");

  const int r = kernel.size / 2;
  const int w = plane.width;
  const int h = plane.height;
  Plane out(w, h);

  // Replicate-padded copy so the inner loop has no clamping.
  const int pw = w + 2 * r;
  std::vector<double> padded(static_cast<std::size_t>(pw) * (h + 2 * r));
  for (int y = -r; y < h + r; ++y) {
    const int sy = std::clamp(y, 0, h - 1);
    for (int x = -r; x < w + r; ++x)
      padded[static_cast<std::size_t>(y + r) * pw + (x + r)] = plane.at(std::clamp(x, 0, w - 1), sy);
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int a = 0; a < kernel.size; ++a) {
        const double* row = &padded[static_cast<std::size_t>(y + a) * pw + x];
        const double* k = &kernel.weights[static_cast<std::size_t>(a) * kernel.size];
        for (int b = 0; b < kernel.size; ++b) acc += k[b] * row[b];
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

CoefficientStack decompose(const Image& image, const FilterBank& bank) {
  const Plane gray = to_plane(to_grayscale(image));
  CoefficientStack stack;
  stack.spec = bank.spec;
  stack.planes.reserve(bank.filters.size());
  for (const auto& f : bank.filters) stack.planes.push_back(convolve2d(gray, f.kernel));
  return stack;
}

Image rescale_to_unit(const Plane& plane) {
  const auto [lo_it, hi_it] = std::minmax_element(plane.values.begin(), plane.values.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::vector<double> px(plane.values.size(), 0.0);
  if (span > 0.0)
    for (std::size_t i = 0; i < px.size(); ++i)
      px[i] = std::clamp((plane.values[i] - lo) / span, 0.0, 1.0);
  return Image(plane.width, plane.height, 1, std::move(px));
}

Image combine_scale(const CoefficientStack& stack, int s) {
  if (s < 1 || s > stack.spec.num_scales)
    throw std::invalid_argument("combine_scale: scale " + std::to_string(s) + " out of range");
  const Plane& first = stack.at(s, 1);
  Plane rss(first.width, first.height);
  for (int d = 1; d <= stack.spec.dirs_per_scale; ++d) {
    const Plane& p = stack.at(s, d);
    for (std::size_t i = 0; i < rss.values.size(); ++i) rss.values[i] += p.values[i] * p.values[i];
  }
  for (double& v : rss.values) v = std::sqrt(v);
  return rescale_to_unit(rss);
}

}  // namespace aerodet
