#include <doctest.h>

#include <cmath>
#include <random>

#include "bfe/error.hpp"
#include "bfe/metrics.hpp"
#include "bfe/synthetic.hpp"
#include "oracles.hpp"

using namespace bfe;

namespace {

Polygon box(double x0, double y0, double x1, double y1) { return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}; }

double box_intersection(const Polygon& a, const Polygon& b) {
  const double ix = std::max(0.0, std::min(a.vertices[1].x, b.vertices[1].x) - std::max(a.vertices[0].x, b.vertices[0].x));
  const double iy = std::max(0.0, std::min(a.vertices[2].y, b.vertices[2].y) - std::max(a.vertices[0].y, b.vertices[0].y));
  return ix * iy;
}

// Analytic IoU of two axis-aligned boxes.
double box_iou(const Polygon& a, const Polygon& b) {
  const double inter = box_intersection(a, b);
  return 100 * inter / (polygon_area(a) + polygon_area(b) - inter);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("confusion_counts") {
  const GridSpec g{{0, 0}, 1.0, 40, 40};
  const Polygon sq = box(5, 5, 15, 15);
  const ConfusionCounts same = confusion_counts(sq, sq, g);
  CHECK(same.tp == 100);
  CHECK(same.fp == 0);
  CHECK(same.fn == 0);
  const ConfusionCounts dis = confusion_counts(sq, box(20, 20, 30, 30), g);
  CHECK(dis.tp == 0);
  CHECK(dis.fp == 100);
  CHECK(dis.fn == 100);

  const Polygon e = box(0, 0, 1, 1), r = box(0.5, 0, 1.5, 1);
  const GridSpec fine{{-0.1, -0.1}, 0.05, 40, 26};
  const ConfusionCounts c = confusion_counts(e, r, fine);
  CHECK(std::abs(iou(c.tp, c.fp, c.fn) - 100.0 / 3) <= 1.0);

  CHECK_THROWS_AS(confusion_counts(sq, box(35, 35, 45, 45), g), Error);
}

TEST_CASE("iou, completeness, correctness") {
  CHECK(iou(10, 0, 0) == 100);
  CHECK(completeness(10, 0) == 100);
  CHECK(correctness(10, 0) == 100);
  CHECK(iou(50, 25, 25) == 50);
  CHECK(completeness(50, 25) == doctest::Approx(200.0 / 3));
  CHECK(correctness(50, 25) == doctest::Approx(200.0 / 3));
  CHECK_THROWS_AS(iou(0, 0, 0), Error);
  CHECK_THROWS_AS(completeness(0, 0), Error);
  CHECK_THROWS_AS(correctness(0, 0), Error);

  // E inside R: correctness 100, completeness below.
  const GridSpec g{{0, 0}, 1.0, 40, 40};
  const ConfusionCounts c = confusion_counts(box(10, 10, 20, 20), box(5, 5, 25, 25), g);
  CHECK(correctness(c.tp, c.fp) == 100);
  CHECK(completeness(c.tp, c.fn) < 100);
}

TEST_CASE("IoU is bounded by Cp and Cr") {
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<long> u(0, 10000);
  for (int k = 0; k < 1000; ++k) {
    const long tp = u(rng) + 1, fp = u(rng), fn = u(rng);
    const double i = iou(tp, fp, fn);
    CHECK(i <= completeness(tp, fn));
    CHECK(i <= correctness(tp, fp));
    CHECK(i >= 0);
  }
}

TEST_CASE("swapping extracted and truth swaps FP and FN") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    const Polygon a = oracle::random_star(rng, 9, {20, 20}, 4, 12);
    const Polygon b = oracle::random_star(rng, 11, {23, 18}, 4, 12);
    const GridSpec g{{0, 0}, 0.5, 90, 90};
    const ConfusionCounts ab = confusion_counts(a, b, g), ba = confusion_counts(b, a, g);
    CHECK(ab.tp == ba.tp);
    CHECK(ab.fp == ba.fn);
    CHECK(ab.fn == ba.fp);
  }
}

TEST_CASE("pixel IoU converges to the analytic value") {
  // Pixel-center sampling misclassifies at most a one-cell strip along each
  // edge (area e), which moves IoU by at most 2e / (union - e). Single
  // pairs need not improve at every halving, but the mean gap does.
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::pair<Polygon, Polygon>> pairs;
  for (int k = 0; k < 200; ++k) {
    const double x0 = u(rng), y0 = u(rng);
    const Polygon a = box(x0, y0, x0 + 2 + 2 * u(rng), y0 + 1 + 2 * u(rng));
    const double x1 = x0 + 1.5 * u(rng), y1 = y0 + u(rng);
    pairs.emplace_back(a, box(x1, y1, x1 + 2 + 2 * u(rng), y1 + 1 + 2 * u(rng)));
  }
  double last = 1e300;
  for (double cs : {0.2, 0.1, 0.05, 0.025}) {
    double sum = 0;
    for (const auto& [a, b] : pairs) {
      const std::vector<Polygon> both{a, b};
      const ConfusionCounts c = confusion_counts(a, b, covering_grid(both, cs));
      const double gap = std::abs(iou(c.tp, c.fp, c.fn) - box_iou(a, b));
      const double e = (polygon_perimeter(a) + polygon_perimeter(b)) * cs;
      const double uni = polygon_area(a) + polygon_area(b) - box_intersection(a, b);
      CHECK(gap <= 100 * 2 * e / (uni - e));
      sum += gap;
    }
    const double mean = sum / double(pairs.size());
    CHECK(mean <= 0.6 * last);
    last = mean;
  }

  // The 0.5-overlap unit squares at 0.05 m cells.
  const Polygon e = box(0, 0, 1, 1), r = box(0.5, 0, 1.5, 1);
  const std::vector<Polygon> both{e, r};
  const ConfusionCounts c = confusion_counts(e, r, covering_grid(both, 0.05));
  CHECK(std::abs(iou(c.tp, c.fp, c.fn) - 100.0 / 3) <= 1.0);
}

TEST_CASE("edc") {
  const Polygon sq = box(0, 0, 1, 1);
  CHECK(edc(sq, sq) == 0);
  CHECK(edc(sq, translate(sq, {3, 4})) == doctest::Approx(5));

  // L-shape vs its MBR: centroids by decomposition into two rectangles.
  const Polygon l{{{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 5}, {0, 5}}};
  const double a1 = 12, a2 = 6;
  const Point2 c1{3, 1}, c2{1, 3.5};
  const Point2 cl = (1.0 / (a1 + a2)) * (a1 * c1 + a2 * c2);
  const Point2 cm{3, 2.5};
  CHECK(edc(l, box(0, 0, 6, 5)) == doctest::Approx(oracle::dist(cl, cm)));

  std::mt19937_64 rng(8);
  const Polygon p = oracle::random_star(rng, 10, {0, 0}, 2, 5), q = oracle::random_star(rng, 12, {3, 1}, 2, 5);
  const double d = edc(p, q);
  CHECK(edc(translate(p, {7, -2}), translate(q, {7, -2})) == doctest::Approx(d));
  CHECK(edc(rotate(p, 40, {1, 1}), rotate(q, 40, {1, 1})) == doctest::Approx(d));
}

TEST_CASE("dare") {
  const Polygon r = rect_footprint({0, 0}, 10, 4, 10);
  CHECK(dare(r, r) == 0);
  CHECK(dare(rect_footprint({0, 0}, 10, 4, 10), rect_footprint({0, 0}, 10, 4, 170)) == doctest::Approx(20));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 360);
  for (int k = 0; k < 100; ++k) {
    const double v = dare(rect_footprint({0, 0}, 10, 4, u(rng)), rect_footprint({0, 0}, 9, 3, u(rng)));
    CHECK(v >= 0);
    CHECK(v <= 90);
  }
}

TEST_CASE("evaluate pairs by overlap") {
  const std::vector<Polygon> truth{box(0, 0, 10, 10), box(20, 0, 30, 10), box(50, 50, 55, 55)};
  const std::vector<Polygon> ext{box(21, 1, 30, 10), box(0, 0, 10, 10), box(80, 80, 85, 85)};
  const EvaluationReport rep = evaluate(ext, truth, 0.25);
  REQUIRE(rep.per_building.size() == 2);
  CHECK(rep.per_building[0].id == 1);
  CHECK(rep.per_building[0].truth_id == 2);
  CHECK(rep.per_building[1].iou == 100);
  CHECK(rep.unmatched_extracted == std::vector<int>{3});
  CHECK(rep.unmatched_truth == std::vector<int>{3});
  CHECK(rep.aggregate.iou == doctest::Approx((rep.per_building[0].iou + 100) / 2));

  const EvaluationReport self = evaluate(truth, truth, 0.15);
  for (const auto& b : self.per_building) {
    CHECK(b.iou == 100);
    CHECK(b.edc == 0);
    CHECK(b.dare == 0);
  }

  // Shifted copy: EDC equals the shift.
  std::vector<Polygon> shifted;
  for (const auto& p : truth) shifted.push_back(translate(p, {0.6, 0.8}));
  for (const auto& b : evaluate(shifted, truth, 0.15).per_building) CHECK(std::abs(b.edc - 1.0) <= 0.15);
}

TEST_CASE("report invariants") {
  std::mt19937_64 rng(77);
  std::vector<Polygon> a, b;
  for (int k = 0; k < 6; ++k) {
    const Point2 c{30.0 * k, 0};
    a.push_back(oracle::random_star(rng, 10, c, 3, 9));
    b.push_back(oracle::random_star(rng, 10, c + Point2{1, 1}, 3, 9));
  }
  for (const auto& s : evaluate(a, b, 0.2).per_building) {
    CHECK(s.iou >= 0);
    CHECK(s.iou <= std::min(s.cp, s.cr));
    CHECK(std::max(s.cp, s.cr) <= 100);
    CHECK(s.edc >= 0);
    CHECK(s.dare >= 0);
    CHECK(s.dare <= 90);
  }
}

}  // TEST_SUITE
