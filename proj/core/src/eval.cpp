#include "aerodet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace aerodet {

void EvalConfig::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
    throw std::invalid_argument("iou_threshold must lie in (0, 1]");
  if (!(score_min >= 0.0 && score_min <= 1.0))
    throw std::invalid_argument("score_min must lie in [0, 1]");
  if (!(sizes.small_max > 0.0) || sizes.medium_max < sizes.small_max)
    throw std::invalid_argument("size thresholds must satisfy 0 < small_max <= medium_max");
}

MatchResult match(const std::vector<Detection>& detections,
                  const std::vector<GroundTruth>& ground_truths, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("IoU threshold must lie in (0, 1]");

  MatchResult m;
  m.iou_threshold = t;
  m.order.resize(detections.size());
  std::iota(m.order.begin(), m.order.end(), 0);
  std::stable_sort(m.order.begin(), m.order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::unordered_map<std::string, std::vector<std::size_t>> gt_by_image;
  for (std::size_t g = 0; g < ground_truths.size(); ++g)
    gt_by_image[ground_truths[g].image_id].push_back(g);

  m.gt_matched.assign(ground_truths.size(), false);
  m.scores.reserve(detections.size());
  m.is_tp.reserve(detections.size());
  m.matched_gt.reserve(detections.size());
  for (std::size_t idx : m.order) {
    const Detection& det = detections[idx];
    std::optional<std::size_t> best_gt;
    double best = -1.0;
    if (auto it = gt_by_image.find(det.image_id); it != gt_by_image.end()) {
      for (std::size_t g : it->second) {
        if (m.gt_matched[g] || ground_truths[g].class_id != det.class_id) continue;
        const double v = iou(det.box, ground_truths[g].box);
        if (v > best) {
          best = v;
          best_gt = g;
        }
      }
    }
    const bool tp = best_gt.has_value() && best >= t;
    if (tp) {
      m.gt_matched[*best_gt] = true;
      ++m.tp;
    } else {
      ++m.fp;
    }
    m.scores.push_back(det.score);
    m.is_tp.push_back(tp);
    m.matched_gt.push_back(tp ? best_gt : std::nullopt);
  }
  m.fn = ground_truths.size() - m.tp;
  return m;
}

PRCurve pr_curve(const MatchResult& m) {
  PRCurve curve;
  curve.num_ground_truth = m.gt_matched.size();
  curve.points.reserve(m.order.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < m.order.size(); ++k) {
    if (m.is_tp[k]) ++tp;
    const double recall = curve.num_ground_truth > 0
                              ? static_cast<double>(tp) / static_cast<double>(curve.num_ground_truth)
                              : 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(k + 1);
    curve.points.push_back({recall, precision, m.scores[k]});
  }
  return curve;
}

PRCurve pr_curve(const std::vector<Detection>& detections,
                 const std::vector<GroundTruth>& ground_truths, double t) {
  return pr_curve(match(detections, ground_truths, t));
}

double average_precision(const PRCurve& curve, ApInterpolation interpolation) {
  if (curve.num_ground_truth == 0)
    throw std::domain_error("average precision is undefined without ground truth");
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;

  // Precision envelope: best precision at this recall or beyond.
  std::vector<double> envelope(pts.size());
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    envelope[i] = running;
  }

  if (interpolation == ApInterpolation::ElevenPoint) {
    double total = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double r = i / 10.0;
      double best = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k)
        if (pts[k].recall >= r) {
          best = envelope[k];
          break;
        }
      total += best;
    }
    return total / 11.0;
  }

  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    ap += (pts[k].recall - prev_recall) * envelope[k];
    prev_recall = pts[k].recall;
  }
  return ap;
}

double raw_step_area(const PRCurve& curve) {
  double area = 0.0;
  double prev_recall = 0.0;
  for (const auto& p : curve.points) {
    area += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
  }
  return area;
}

std::vector<double> coco_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back((50.0 + 5.0 * i) / 100.0);
  return t;
}

ApSummary ap_range(const std::vector<Detection>& detections,
                   const std::vector<GroundTruth>& ground_truths, ApInterpolation interpolation) {
  ApSummary s;
  double total = 0.0;
  const auto thresholds = coco_iou_thresholds();
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double ap = average_precision(pr_curve(detections, ground_truths, thresholds[i]),
                                        interpolation);
    total += ap;
    if (i == 0) s.ap50 = ap;
    if (i == 5) s.ap75 = ap;
  }
  s.ap = total / static_cast<double>(thresholds.size());
  return s;
}

SizeStratifiedAp size_stratified_ap(const std::vector<Detection>& detections,
                                    const std::vector<GroundTruth>& ground_truths, double t,
                                    const SizeThresholds& sizes, ApInterpolation interpolation) {
  const MatchResult full = match(detections, ground_truths, t);
  std::vector<std::optional<std::size_t>> matched_gt_of_det(detections.size());
  for (std::size_t k = 0; k < full.order.size(); ++k) matched_gt_of_det[full.order[k]] = full.matched_gt[k];

  const auto ap_for = [&](SizeClass cls) -> std::optional<double> {
    std::vector<GroundTruth> gts;
    for (const auto& g : ground_truths)
      if (area_class(g.box, sizes) == cls) gts.push_back(g);
    if (gts.empty()) return std::nullopt;
    std::vector<Detection> dets;
    for (std::size_t i = 0; i < detections.size(); ++i) {
      const auto& g = matched_gt_of_det[i];
      if (g && area_class(ground_truths[*g].box, sizes) != cls) continue;
      dets.push_back(detections[i]);
    }
    return average_precision(pr_curve(dets, gts, t), interpolation);
  };
  return {ap_for(SizeClass::Small), ap_for(SizeClass::Medium), ap_for(SizeClass::Large)};
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ClassificationScores classification_scores(const MatchResult& m) {
  const double tp = static_cast<double>(m.tp);
  const double fp = static_cast<double>(m.fp);
  const double fn = static_cast<double>(m.fn);
  ClassificationScores s;
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
  s.accuracy = ratio(tp, tp + fp + fn);
  return s;
}

std::vector<MrFppiPoint> mr_fppi_curve(const std::vector<Detection>& detections,
                                       const std::vector<GroundTruth>& ground_truths, double t,
                                       bool fppi_per_image) {
  const MatchResult m = match(detections, ground_truths, t);
  std::set<std::string> images;
  for (const auto& d : detections) images.insert(d.image_id);
  for (const auto& g : ground_truths) images.insert(g.image_id);
  const double num_images = static_cast<double>(images.size());
  const double num_gt = static_cast<double>(ground_truths.size());

  std::vector<MrFppiPoint> curve;
  curve.reserve(m.order.size());
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < m.order.size(); ++k) {
    m.is_tp[k] ? ++tp : ++fp;
    const double recall = num_gt > 0.0 ? static_cast<double>(tp) / num_gt : 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(k + 1);
    const double fppi = fppi_per_image ? static_cast<double>(fp) / num_images : 1.0 - precision;
    curve.push_back({fppi, 1.0 - recall});
  }
  return curve;
}

std::vector<double> lamr_reference_points() {
  std::vector<double> f;
  for (int i = 0; i < 9; ++i) f.push_back(std::pow(10.0, -2.0 + 0.25 * i));
  return f;
}

double lamr(const std::vector<MrFppiPoint>& curve) {
  if (curve.empty()) throw std::invalid_argument("lamr: empty curve");

  // Fallback when no point lies at or below a reference: the smallest fppi.
  const MrFppiPoint* smallest = &curve.front();
  for (const auto& p : curve)
    if (p.fppi < smallest->fppi || (p.fppi == smallest->fppi && p.mr < smallest->mr)) smallest = &p;

  std::vector<double> sampled;
  for (double f : lamr_reference_points()) {
    const MrFppiPoint* pick = nullptr;
    for (const auto& p : curve) {
      if (p.fppi > f) continue;
      if (pick == nullptr || p.fppi > pick->fppi || (p.fppi == pick->fppi && p.mr < pick->mr))
        pick = &p;
    }
    if (pick == nullptr) pick = smallest;
    sampled.push_back(std::max(pick->mr, kMissRateFloor));
  }

  if (std::all_of(sampled.begin(), sampled.end(), [&](double v) { return v == sampled.front(); }))
    return sampled.front();
  double log_sum = 0.0;
  for (double v : sampled) log_sum += std::log(v);
  return std::exp(log_sum / static_cast<double>(sampled.size()));
}

EvalReport evaluate(const std::vector<Detection>& detections,
                    const std::vector<GroundTruth>& ground_truths, const EvalConfig& config) {
  config.validate();
  if (ground_truths.empty()) throw std::invalid_argument("evaluate: no ground truth to score against");

  EvalReport r;
  r.ap = ap_range(detections, ground_truths, config.interpolation);
  r.ap50_by_size = size_stratified_ap(detections, ground_truths, 0.5, config.sizes, config.interpolation);

  std::vector<Detection> confident;
  for (const auto& d : detections)
    if (d.score >= config.score_min) confident.push_back(d);
  r.scores = classification_scores(match(confident, ground_truths, config.iou_threshold));

  r.pr = pr_curve(detections, ground_truths, config.iou_threshold);
  r.mr_fppi = mr_fppi_curve(detections, ground_truths, config.iou_threshold, config.fppi_per_image);
  // No detections at all: every object is missed at every reference point.
  r.lamr = r.mr_fppi.empty() ? 1.0 : lamr(r.mr_fppi);
  return r;
}

nlohmann::json to_json(const EvalReport& report) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"ap", report.ap.ap},
          {"ap50", report.ap.ap50},
          {"ap75", report.ap.ap75},
          {"ap50_small", opt(report.ap50_by_size.small)},
          {"ap50_medium", opt(report.ap50_by_size.medium)},
          {"ap50_large", opt(report.ap50_by_size.large)},
          {"precision", report.scores.precision},
          {"recall", report.scores.recall},
          {"f1", report.scores.f1},
          {"accuracy", report.scores.accuracy},
          {"lamr", report.lamr}};
}

}  // namespace aerodet
