#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aerodet/boxes.hpp"

namespace aerodet {

struct KMeansOptions {
  int max_iterations = 300;
};

struct RestartTrace {
  double initial_mean_iou = 0.0;
  double mean_iou = 0.0;
  int iterations = 0;
};

struct AnchorEstimate {
  int k = 0;
  std::vector<Anchor> anchors;  // ascending area
  double mean_iou = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
  std::vector<RestartTrace> trace;  // one entry per restart, in order
};

struct SweepEntry {
  int k = 0;
  double mean_iou = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // strictly increasing k
};

struct Summary {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double skewness = 0.0;
};

struct BoxStats {
  Summary area;
  Summary aspect_ratio;  // w / h
};

// Mean over shapes of the best shape_iou against any anchor.
double mean_iou(std::span<const Anchor> shapes, std::span<const Anchor> anchors);

// k-means under the 1 - shape_iou distance with median centroids.
// Each restart r draws its initial centroids from RandomStream(seed).split(r);
// the best restart by mean_iou wins, ties to the lower r.
AnchorEstimate kmeans_iou(std::span<const Anchor> shapes, int k, std::uint64_t seed,
                          int restarts, const KMeansOptions& options = {});

SweepResult sweep(std::span<const Anchor> shapes, int k_min, int k_max, std::uint64_t seed,
                  int restarts, const KMeansOptions& options = {});

// Quartiles by inclusive linear interpolation; skewness is the biased
// sample Fisher-Pearson coefficient g1 = m3 / m2^1.5 (0 for zero variance).
Summary summarize(std::vector<double> values);
BoxStats box_stats(std::span<const Anchor> shapes);

std::size_t count_distinct(std::span<const Anchor> shapes);

nlohmann::json to_json(const AnchorEstimate& estimate);
nlohmann::json to_json(const BoxStats& stats);

}  // namespace aerodet
