#pragma once

#include <string>
#include <vector>

namespace aerodet {

// Top-left corner and extents in continuous pixel coordinates.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }

  bool operator==(const Box&) const = default;
};

// Throws std::invalid_argument unless extents are positive and all fields finite.
void validate(const Box& box);

// Width/height pair. Used both for anchor priors and for box shapes.
struct Anchor {
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  bool operator==(const Anchor&) const = default;
  auto operator<=>(const Anchor&) const = default;
};

inline Anchor extent_of(const Box& b) { return {b.w, b.h}; }

struct Detection {
  std::string image_id;
  Box box;
  double score = 0.0;
  int class_id = 0;
};

struct GroundTruth {
  std::string image_id;
  Box box;
  int class_id = 0;
};

struct GridSpec {
  int grid_w = 0;
  int grid_h = 0;
  double stride = 0.0;
  std::vector<Anchor> anchors;

  void validate() const;
};

struct GridEncoding {
  int cell_x = 0;
  int cell_y = 0;
  double tx = 0.0;  // centre offset within the cell, [0, 1)
  double ty = 0.0;
  double tw = 0.0;  // ln(box.w / anchor.w)
  double th = 0.0;
};

enum class SizeClass { Small, Medium, Large };

// COCO area thresholds.
struct SizeThresholds {
  double small_max = 32.0 * 32.0;
  double medium_max = 96.0 * 96.0;
};

double iou(const Box& a, const Box& b);

// IoU of two boxes sharing a centre; depends only on extents.
double shape_iou(const Anchor& a, const Anchor& b);

GridEncoding encode(const Box& box, const GridSpec& grid, int anchor_index);
Box decode(const GridEncoding& enc, const GridSpec& grid, int anchor_index);

SizeClass area_class(const Box& box, const SizeThresholds& thresholds = {});

const char* to_string(SizeClass c);

}  // namespace aerodet
