#include "aerodet/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "aerodet/random.hpp"

namespace aerodet {
namespace {

std::vector<Anchor> distinct_sorted(std::span<const Anchor> shapes) {
  std::vector<Anchor> d(shapes.begin(), shapes.end());
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

void check_shapes(std::span<const Anchor> shapes) {
  if (shapes.empty()) throw std::invalid_argument("no shapes given");
  for (const auto& s : shapes)
    if (!(s.w > 0.0) || !(s.h > 0.0) || !std::isfinite(s.w) || !std::isfinite(s.h))
      throw std::invalid_argument("shape extents must be positive and finite");
}

double best_iou(const Anchor& shape, std::span<const Anchor> anchors, std::size_t* index = nullptr) {
  double best = -1.0;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const double v = shape_iou(shape, anchors[j]);
    if (v > best) {
      best = v;
      if (index) *index = j;
    }
  }
  return best;
}

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct LloydResult {
  std::vector<Anchor> anchors;
  double mean_iou = 0.0;
  double initial_mean_iou = 0.0;
  int iterations = 0;
};

// Keeps the best-scoring centroid set visited, so the result never scores
// below its initialisation.
LloydResult lloyd(std::span<const Anchor> shapes, std::vector<Anchor> centroids,
                  const KMeansOptions& options) {
  const std::size_t n = shapes.size();
  const std::size_t k = centroids.size();

  const double initial = mean_iou(shapes, centroids);
  LloydResult best{centroids, initial, initial, 0};
  std::vector<std::size_t> assignment(n, k);
  std::vector<std::size_t> next(n);
  std::vector<std::vector<double>> ws(k), hs(k);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) best_iou(shapes[i], centroids, &next[i]);
    if (next == assignment) break;
    assignment = next;

    for (auto& v : ws) v.clear();
    for (auto& v : hs) v.clear();
    for (std::size_t i = 0; i < n; ++i) {
      ws[assignment[i]].push_back(shapes[i].w);
      hs[assignment[i]].push_back(shapes[i].h);
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (ws[j].empty()) continue;
      centroids[j] = {median_of(ws[j]), median_of(hs[j])};
    }
    // Empty clusters take the currently worst-covered shape.
    for (std::size_t j = 0; j < k; ++j) {
      if (!ws[j].empty()) continue;
      std::size_t worst = 0;
      double worst_iou = 2.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = best_iou(shapes[i], centroids);
        if (v < worst_iou) {
          worst_iou = v;
          worst = i;
        }
      }
      centroids[j] = shapes[worst];
    }

    const double score = mean_iou(shapes, centroids);
    if (score > best.mean_iou) {
      best.anchors = centroids;
      best.mean_iou = score;
    }
  }
  best.iterations = iter;
  return best;
}

}  // namespace

std::size_t count_distinct(std::span<const Anchor> shapes) {
  return distinct_sorted(shapes).size();
}

double mean_iou(std::span<const Anchor> shapes, std::span<const Anchor> anchors) {
  if (shapes.empty() || anchors.empty())
    throw std::invalid_argument("mean_iou: shapes and anchors must be non-empty");
  double total = 0.0;
  for (const auto& s : shapes) total += best_iou(s, anchors);
  return total / static_cast<double>(shapes.size());
}

AnchorEstimate kmeans_iou(std::span<const Anchor> shapes, int k, std::uint64_t seed, int restarts,
                          const KMeansOptions& options) {
  check_shapes(shapes);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const std::vector<Anchor> distinct = distinct_sorted(shapes);
  if (static_cast<std::size_t>(k) > distinct.size())
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(distinct.size()) + " distinct shapes");

  const RandomStream root(seed);
  LloydResult best;
  bool have_best = false;
  std::vector<RestartTrace> trace;
  for (int r = 0; r < restarts; ++r) {
    RandomStream rng = root.split(static_cast<std::uint64_t>(r));
    std::vector<std::size_t> idx(distinct.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Anchor> init;
    init.reserve(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      const std::size_t pick = i + rng.below(idx.size() - i);
      std::swap(idx[i], idx[pick]);
      init.push_back(distinct[idx[i]]);
    }
    LloydResult run = lloyd(shapes, std::move(init), options);
    trace.push_back({run.initial_mean_iou, run.mean_iou, run.iterations});
    if (!have_best || run.mean_iou > best.mean_iou) {
      best = std::move(run);
      have_best = true;
    }
  }

  std::sort(best.anchors.begin(), best.anchors.end(), [](const Anchor& a, const Anchor& b) {
    if (a.area() != b.area()) return a.area() < b.area();
    return a.w < b.w;
  });
  return {k, std::move(best.anchors), best.mean_iou, seed, restarts, std::move(trace)};
}

SweepResult sweep(std::span<const Anchor> shapes, int k_min, int k_max, std::uint64_t seed,
                  int restarts, const KMeansOptions& options) {
  check_shapes(shapes);
  if (k_min < 1 || k_min > k_max) throw std::invalid_argument("sweep needs 1 <= k_min <= k_max");
  SweepResult out;
  for (int k = k_min; k <= k_max; ++k)
    out.entries.push_back({k, kmeans_iou(shapes, k, seed, restarts, options).mean_iou});
  return out;
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return values[n - 1];
    return values[lo] + frac * (values[lo + 1] - values[lo]);
  };

  Summary s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);

  if (values.front() != values.back()) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
      const double d = v - mean;
      m2 += d * d;
      m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 > 0.0) s.skewness = m3 / std::pow(m2, 1.5);
  }
  return s;
}

BoxStats box_stats(std::span<const Anchor> shapes) {
  check_shapes(shapes);
  std::vector<double> areas, ratios;
  areas.reserve(shapes.size());
  ratios.reserve(shapes.size());
  for (const auto& s : shapes) {
    areas.push_back(s.area());
    ratios.push_back(s.w / s.h);
  }
  return {summarize(std::move(areas)), summarize(std::move(ratios))};
}

nlohmann::json to_json(const AnchorEstimate& estimate) {
  nlohmann::json anchors = nlohmann::json::array();
  for (const auto& a : estimate.anchors) anchors.push_back({{"w", a.w}, {"h", a.h}});
  return {{"k", estimate.k}, {"anchors", std::move(anchors)}, {"mean_iou", estimate.mean_iou}};
}

namespace {

nlohmann::json to_json(const Summary& s) {
  return {{"min", s.min},       {"q1", s.q1},   {"median", s.median},
          {"q3", s.q3},         {"max", s.max}, {"skewness", s.skewness}};
}

}  // namespace

nlohmann::json to_json(const BoxStats& stats) {
  return {{"area", to_json(stats.area)}, {"aspect_ratio", to_json(stats.aspect_ratio)}};
}

}  // namespace aerodet
