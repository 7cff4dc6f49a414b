#include "aerodet/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aerodet {

void validate(const Box& box) {
  if (!std::isfinite(box.x) || !std::isfinite(box.y) || !std::isfinite(box.w) ||
      !std::isfinite(box.h))
    throw std::invalid_argument("box fields must be finite");
  if (box.w <= 0.0 || box.h <= 0.0) throw std::invalid_argument("box extents must be positive");
}

void GridSpec::validate() const {
  if (grid_w < 1 || grid_h < 1) throw std::invalid_argument("grid dimensions must be positive");
  if (!(stride > 0.0)) throw std::invalid_argument("grid stride must be positive");
  if (anchors.empty()) throw std::invalid_argument("grid needs at least one anchor");
  for (const auto& a : anchors)
    if (!(a.w > 0.0) || !(a.h > 0.0)) throw std::invalid_argument("anchor extents must be positive");
}

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double ih = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

double shape_iou(const Anchor& a, const Anchor& b) {
  const double inter = std::min(a.w, b.w) * std::min(a.h, b.h);
  return inter / (a.area() + b.area() - inter);
}

namespace {

const Anchor& anchor_at(const GridSpec& grid, int anchor_index) {
  if (anchor_index < 0 || static_cast<std::size_t>(anchor_index) >= grid.anchors.size())
    throw std::invalid_argument("anchor index " + std::to_string(anchor_index) + " out of range");
  return grid.anchors[static_cast<std::size_t>(anchor_index)];
}

}  // namespace

GridEncoding encode(const Box& box, const GridSpec& grid, int anchor_index) {
  validate(box);
  grid.validate();
  const Anchor& anchor = anchor_at(grid, anchor_index);

  const double gx = box.center_x() / grid.stride;
  const double gy = box.center_y() / grid.stride;
  if (gx < 0.0 || gy < 0.0 || gx >= grid.grid_w || gy >= grid.grid_h)
    throw std::invalid_argument("box centre lies outside the grid");

  GridEncoding enc;
  enc.cell_x = static_cast<int>(std::floor(gx));
  enc.cell_y = static_cast<int>(std::floor(gy));
  enc.tx = gx - enc.cell_x;
  enc.ty = gy - enc.cell_y;
  enc.tw = std::log(box.w / anchor.w);
  enc.th = std::log(box.h / anchor.h);
  return enc;
}

Box decode(const GridEncoding& enc, const GridSpec& grid, int anchor_index) {
  grid.validate();
  const Anchor& anchor = anchor_at(grid, anchor_index);
  if (enc.cell_x < 0 || enc.cell_y < 0 || enc.cell_x >= grid.grid_w || enc.cell_y >= grid.grid_h)
    throw std::invalid_argument("cell index out of range");

  const double cx = (enc.cell_x + enc.tx) * grid.stride;
  const double cy = (enc.cell_y + enc.ty) * grid.stride;
  const double w = anchor.w * std::exp(enc.tw);
  const double h = anchor.h * std::exp(enc.th);
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

SizeClass area_class(const Box& box, const SizeThresholds& thresholds) {
  const double a = box.area();
  if (a < thresholds.small_max) return SizeClass::Small;
  if (a < thresholds.medium_max) return SizeClass::Medium;
  return SizeClass::Large;
}

const char* to_string(SizeClass c) {
  switch (c) {
    case SizeClass::Small: return "small";
    case SizeClass::Medium: return "medium";
    case SizeClass::Large: return "large";
  }
  return "unknown";
}

}  // namespace aerodet
