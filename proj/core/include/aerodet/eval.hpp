#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aerodet/boxes.hpp"

namespace aerodet {

struct MatchResult {
  double iou_threshold = 0.5;
  // Detection indices sorted by descending score, ties in input order.
  std::vector<std::size_t> order;
  std::vector<double> scores;  // parallel to `order`
  // Parallel to `order`.
  std::vector<bool> is_tp;
  std::vector<std::optional<std::size_t>> matched_gt;
  // Indexed like the ground-truth input.
  std::vector<bool> gt_matched;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;
  double score = 0.0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // one per detection rank
  std::size_t num_ground_truth = 0;
};

struct MrFppiPoint {
  double fppi = 0.0;
  double mr = 0.0;
};

enum class ApInterpolation { AllPoint, ElevenPoint };

struct ApSummary {
  double ap = 0.0;  // mean over IoU 0.50:0.05:0.95
  double ap50 = 0.0;
  double ap75 = 0.0;
};

struct SizeStratifiedAp {
  std::optional<double> small;
  std::optional<double> medium;
  std::optional<double> large;
};

struct ClassificationScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

struct EvalConfig {
  double iou_threshold = 0.5;
  double score_min = 0.5;
  SizeThresholds sizes;
  ApInterpolation interpolation = ApInterpolation::AllPoint;
  // false: FPPI = FP / (FP + TP); true: FP / number of images.
  bool fppi_per_image = false;

  void validate() const;
};

struct EvalReport {
  ApSummary ap;
  SizeStratifiedAp ap50_by_size;
  ClassificationScores scores;
  double lamr = 0.0;
  PRCurve pr;
  std::vector<MrFppiPoint> mr_fppi;
};

inline constexpr double kMissRateFloor = 1e-10;

// Greedy per image by descending score; each detection takes the unmatched
// same-class ground truth with the highest IoU, TP when that IoU >= t.
MatchResult match(const std::vector<Detection>& detections,
                  const std::vector<GroundTruth>& ground_truths, double t);

PRCurve pr_curve(const std::vector<Detection>& detections,
                 const std::vector<GroundTruth>& ground_truths, double t);
PRCurve pr_curve(const MatchResult& match);

// Throws std::domain_error when the curve has no ground truth behind it.
double average_precision(const PRCurve& curve,
                         ApInterpolation interpolation = ApInterpolation::AllPoint);

// Area under the raw (non-enveloped) step curve.
double raw_step_area(const PRCurve& curve);

std::vector<double> coco_iou_thresholds();

ApSummary ap_range(const std::vector<Detection>& detections,
                   const std::vector<GroundTruth>& ground_truths,
                   ApInterpolation interpolation = ApInterpolation::AllPoint);

SizeStratifiedAp size_stratified_ap(const std::vector<Detection>& detections,
                                    const std::vector<GroundTruth>& ground_truths, double t,
                                    const SizeThresholds& sizes = {},
                                    ApInterpolation interpolation = ApInterpolation::AllPoint);

ClassificationScores classification_scores(const MatchResult& match);

std::vector<MrFppiPoint> mr_fppi_curve(const std::vector<Detection>& detections,
                                       const std::vector<GroundTruth>& ground_truths, double t,
                                       bool fppi_per_image = false);

std::vector<double> lamr_reference_points();

double lamr(const std::vector<MrFppiPoint>& curve);

// Throws std::invalid_argument when there is no ground truth to score against.
EvalReport evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruth>& ground_truths, const EvalConfig& config = {});

nlohmann::json to_json(const EvalReport& report);

}  // namespace aerodet
