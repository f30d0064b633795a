#include "bfe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "bfe/error.hpp"

namespace bfe {
namespace {

struct Box {
  double xmin, ymin, xmax, ymax;
};

Box bounds(const Polygon& p) {
  if (p.vertices.empty()) fail(ErrorKind::DegenerateInput, "empty polygon");
  Box b{p.vertices[0].x, p.vertices[0].y, p.vertices[0].x, p.vertices[0].y};
  for (const auto& v : p.vertices) {
    b.xmin = std::min(b.xmin, v.x);
    b.ymin = std::min(b.ymin, v.y);
    b.xmax = std::max(b.xmax, v.x);
    b.ymax = std::max(b.ymax, v.y);
  }
  return b;
}

bool covers(const GridSpec& g, const Box& b) {
  return b.xmin >= g.origin.x && b.ymin >= g.origin.y && b.xmax <= g.origin.x + g.width * g.cell_size &&
         b.ymax <= g.origin.y + g.height * g.cell_size;
}

}  // namespace

ConfusionCounts confusion_counts(const Polygon& extracted, const Polygon& truth, const GridSpec& grid) {
  if (!covers(grid, bounds(extracted)) || !covers(grid, bounds(truth))) {
    fail(ErrorKind::InvalidArgument, "confusion_counts: grid does not cover both polygons");
  }
  const BinaryGrid e = rasterize_polygon(extracted, grid);
  const BinaryGrid r = rasterize_polygon(truth, grid);
  ConfusionCounts c;
  for (std::size_t i = 0; i < e.cells.size(); ++i) {
    const bool in_e = e.cells[i] != 0;
    const bool in_r = r.cells[i] != 0;
    c.tp += in_e && in_r;
    c.fp += in_e && !in_r;
    c.fn += !in_e && in_r;
  }
  return c;
}

double iou(long tp, long fp, long fn) {
  if (tp + fp + fn <= 0) fail(ErrorKind::UndefinedMetric, "IoU undefined: TP + FP + FN = 0");
  return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
}

double completeness(long tp, long fn) {
  if (tp + fn <= 0) fail(ErrorKind::UndefinedMetric, "completeness undefined: TP + FN = 0");
  return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double correctness(long tp, long fp) {
  if (tp + fp <= 0) fail(ErrorKind::UndefinedMetric, "correctness undefined: TP + FP = 0");
  return 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double edc(const Polygon& extracted, const Polygon& truth) {
  return distance(polygon_centroid(extracted), polygon_centroid(truth));
}

double dare(const Polygon& extracted, const Polygon& truth) {
  const double d = std::abs(dominant_angle(extracted) - dominant_angle(truth));
  return std::min(d, 180.0 - d);
}

GridSpec covering_grid(std::span<const Polygon> polygons, double cell_size) {
  if (!(cell_size > 0)) fail(ErrorKind::InvalidArgument, "covering_grid: cell size must be positive");
  if (polygons.empty()) fail(ErrorKind::InvalidArgument, "covering_grid: no polygons");
  Box all = bounds(polygons[0]);
  for (const auto& p : polygons) {
    const Box b = bounds(p);
    all = {std::min(all.xmin, b.xmin), std::min(all.ymin, b.ymin), std::max(all.xmax, b.xmax),
           std::max(all.ymax, b.ymax)};
  }
  GridSpec g;
  g.cell_size = cell_size;
  const double i0 = std::floor(all.xmin / cell_size) - 1;
  const double j0 = std::floor(all.ymin / cell_size) - 1;
  const double i1 = std::ceil(all.xmax / cell_size) + 1;
  const double j1 = std::ceil(all.ymax / cell_size) + 1;
  g.origin = {i0 * cell_size, j0 * cell_size};
  g.width = static_cast<int>(i1 - i0);
  g.height = static_cast<int>(j1 - j0);
  return g;
}

EvaluationReport evaluate(std::span<const Polygon> extracted, std::span<const Polygon> truth, double cell_size) {
  struct Candidate {
    double iou;
    std::size_t e, r;
    ConfusionCounts counts;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < extracted.size(); ++i) {
    const Box be = bounds(extracted[i]);
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const Box br = bounds(truth[j]);
      if (be.xmax < br.xmin || br.xmax < be.xmin || be.ymax < br.ymin || br.ymax < be.ymin) continue;
      const Polygon pair[2] = {extracted[i], truth[j]};
      const ConfusionCounts c = confusion_counts(extracted[i], truth[j], covering_grid(pair, cell_size));
      if (c.tp == 0) continue;
      candidates.push_back({iou(c.tp, c.fp, c.fn), i, j, c});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.iou, a.e, a.r) < std::tie(a.iou, b.e, b.r);
  });

  EvaluationReport report;
  std::vector<bool> used_e(extracted.size(), false), used_r(truth.size(), false);
  for (const auto& c : candidates) {
    if (used_e[c.e] || used_r[c.r]) continue;
    used_e[c.e] = used_r[c.r] = true;
    BuildingScore s;
    s.id = static_cast<int>(c.e) + 1;
    s.truth_id = static_cast<int>(c.r) + 1;
    s.iou = c.iou;
    s.cp = completeness(c.counts.tp, c.counts.fn);
    s.cr = correctness(c.counts.tp, c.counts.fp);
    s.edc = edc(extracted[c.e], truth[c.r]);
    s.dare = dare(extracted[c.e], truth[c.r]);
    report.per_building.push_back(s);
  }
  std::sort(report.per_building.begin(), report.per_building.end(),
            [](const BuildingScore& a, const BuildingScore& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < extracted.size(); ++i) {
    if (!used_e[i]) report.unmatched_extracted.push_back(static_cast<int>(i) + 1);
  }
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (!used_r[j]) report.unmatched_truth.push_back(static_cast<int>(j) + 1);
  }
  if (!report.per_building.empty()) {
    const double n = static_cast<double>(report.per_building.size());
    for (const auto& s : report.per_building) {
      report.aggregate.iou += s.iou / n;
      report.aggregate.cp += s.cp / n;
      report.aggregate.cr += s.cr / n;
      report.aggregate.edc += s.edc / n;
      report.aggregate.dare += s.dare / n;
    }
  }
  return report;
}

}  // namespace bfe
