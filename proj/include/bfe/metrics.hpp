#pragma once

#include <span>
#include <vector>

#include "bfe/geometry.hpp"

namespace bfe {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

/// Pixel-center rasterization of both polygons on `grid`.
ConfusionCounts confusion_counts(const Polygon& extracted, const Polygon& truth, const GridSpec& grid);

/// Percentages; zero denominators raise ErrorKind::UndefinedMetric.
double iou(long tp, long fp, long fn);
double completeness(long tp, long fn);
double correctness(long tp, long fp);

/// Distance between area centroids.
double edc(const Polygon& extracted, const Polygon& truth);
/// Dominant-angle difference folded across 180 degrees: min(d, 180 - d).
double dare(const Polygon& extracted, const Polygon& truth);

/// Grid aligned to multiples of `cell_size` covering every polygon with a
/// one-cell margin.
GridSpec covering_grid(std::span<const Polygon> polygons, double cell_size);

struct BuildingScore {
  int id = 0;  // extracted id (1-based position)
  int truth_id = 0;
  double iou = 0, cp = 0, cr = 0, edc = 0, dare = 0;
};

struct EvaluationReport {
  std::vector<BuildingScore> per_building;
  BuildingScore aggregate;  // means over per_building
  std::vector<int> unmatched_extracted;
  std::vector<int> unmatched_truth;
};

/// Pairs extracted and truth polygons one-to-one by decreasing pixel IoU
/// (pairs with no overlap are never matched) and scores each pair.
EvaluationReport evaluate(std::span<const Polygon> extracted, std::span<const Polygon> truth, double cell_size);

}  // namespace bfe
