#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "bfe/error.hpp"
#include "bfe/geometry.hpp"
#include "oracles.hpp"

using namespace bfe;

namespace {

bool same_point_set(std::vector<Point2> a, std::vector<Point2> b) {
  auto less = [](Point2 p, Point2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

std::vector<Point2> random_points(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2> p(static_cast<std::size_t>(n));
  for (auto& q : p) q = {u(rng), u(rng)};
  return p;
}

// Strictly inside triangle (a, b, c) of any orientation.
bool in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double d1 = orient(a, b, p), d2 = orient(b, c, p), d3 = orient(c, a, p);
  return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("convex_hull examples") {
  const Polygon sq = convex_hull(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
  CHECK(same_point_set(sq.vertices, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  const Polygon tri = convex_hull(std::vector<Point2>{{0, 0}, {4, 0}, {0, 3}});
  CHECK(same_point_set(tri.vertices, {{0, 0}, {4, 0}, {0, 3}}));
  CHECK(signed_area(tri) > 0);

  CHECK_THROWS_AS(convex_hull(std::vector<Point2>{{0, 0}, {1, 1}}), Error);
  CHECK_THROWS_AS(convex_hull(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}), Error);
}

TEST_CASE("convex_hull matches brute-force extreme points") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    // Points in a disk.
    std::vector<Point2> pts;
    std::uniform_real_distribution<double> u(-1, 1);
    while (pts.size() < 60) {
      const Point2 p{u(rng), u(rng)};
      if (p.x * p.x + p.y * p.y <= 1) pts.push_back(p);
    }
    // A point is a hull vertex iff it lies in no triangle of other points
    // and is not between two others on a line (random data: no collinear).
    std::vector<Point2> extreme;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      bool inside = false;
      for (std::size_t a = 0; a < pts.size() && !inside; ++a) {
        for (std::size_t b = a + 1; b < pts.size() && !inside; ++b) {
          for (std::size_t c = b + 1; c < pts.size() && !inside; ++c) {
            if (a == i || b == i || c == i) continue;
            inside = in_triangle(pts[i], pts[a], pts[b], pts[c]);
          }
        }
      }
      if (!inside) extreme.push_back(pts[i]);
    }
    const Polygon hull = convex_hull(pts);
    CHECK(same_point_set(hull.vertices, extreme));
    for (const auto& p : pts) {
      for (std::size_t k = 0; k < hull.size(); ++k) {
        CHECK(orient(hull.vertices[k], hull.vertices[(k + 1) % hull.size()], p) >= -1e-12);
      }
    }
  }
}

TEST_CASE("min_area_rect examples") {
  const OrientedRect r = min_area_rect(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(r.area() == doctest::Approx(1.0));
  CHECK(r.angle == doctest::Approx(0.0));
  CHECK(r.center.x == doctest::Approx(0.5));

  // Unit square rotated by 30 degrees.
  std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (auto& p : sq) p = rotate(p, 30.0);
  const OrientedRect rot = min_area_rect(sq);
  CHECK(rot.area() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rot.angle == doctest::Approx(30.0).epsilon(1e-9));
  CHECK(rot.area() <= oracle::swept_min_box_area(sq) + 1e-9);

  // A 4 x 2 rectangle at 120 degrees reports its long axis mod 90.
  std::vector<Point2> rect{{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  for (auto& p : rect) p = rotate(p, 120.0);
  CHECK(min_area_rect(rect).angle == doctest::Approx(30.0).epsilon(1e-9));
}

TEST_CASE("min_area_rect agrees with the 0.01 degree sweep") {
  std::mt19937_64 rng(3);
  // L-shaped point set.
  const std::vector<Point2> l{{0, 0}, {16, 0}, {16, 7}, {9, 7}, {9, 14}, {0, 14}};
  std::vector<Point2> lr;
  for (auto p : l) lr.push_back(rotate(p, 8.0));
  const double sweep = oracle::swept_min_box_area(lr);
  CHECK(std::abs(min_area_rect(lr).area() - sweep) <= 0.005 * sweep);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(rng, 30, -5, 5);
    const double s = oracle::swept_min_box_area(pts);
    const OrientedRect m = min_area_rect(pts);
    CHECK(m.area() <= s * (1 + 1e-12));
    CHECK(m.area() >= s * (1 - 0.005));
    // Every point inside the rectangle.
    const Polygon box = m.to_polygon();
    for (const auto& p : pts) {
      for (std::size_t k = 0; k < 4; ++k) CHECK(orient(box.vertices[k], box.vertices[(k + 1) % 4], p) >= -1e-9);
    }
  }
}

TEST_CASE("hausdorff examples and oracle") {
  const std::vector<Point2> a{{0, 0}, {1, 2}, {3, 1}};
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(std::vector<Point2>{{0, 0}}, std::vector<Point2>{{3, 4}}) == 5.0);
  CHECK_THROWS_AS(hausdorff_distance(a, std::vector<Point2>{}), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_points(rng, 50, 0, 100);
    const auto q = random_points(rng, 50, 20, 120);
    CHECK(hausdorff_distance(p, q) == oracle::hausdorff(p, q));
    CHECK(hausdorff_distance(p, q) == hausdorff_distance(q, p));
  }
}

TEST_CASE("polygon area and centroid") {
  const Polygon unit{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK(polygon_area(unit) == 1.0);
  CHECK(polygon_area(Polygon{{{0, 0}, {4, 0}, {0, 3}}}) == 6.0);
  const Point2 c = polygon_centroid(unit);
  CHECK(c.x == doctest::Approx(0.5));
  CHECK(c.y == doctest::Approx(0.5));

  const Point2 ct = polygon_centroid(translate(unit, {10, -7}));
  CHECK(ct.x == doctest::Approx(10.5));
  CHECK(ct.y == doctest::Approx(-6.5));

  // [0,2]^2 minus [1,2]^2: three unit squares centred at (.5,.5), (1.5,.5), (.5,1.5).
  const Polygon l{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
  const Point2 cl = polygon_centroid(l);
  CHECK(cl.x == doctest::Approx((0.5 + 1.5 + 0.5) / 3.0));
  CHECK(cl.y == doctest::Approx((0.5 + 0.5 + 1.5) / 3.0));

  const Polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_THROWS_AS(polygon_area(bowtie), Error);
  CHECK_THROWS_AS(polygon_centroid(Polygon{{{0, 0}, {1, 0}, {2, 0}}}), Error);
}

TEST_CASE("polygon area matches Monte-Carlo estimate") {
  std::mt19937_64 rng(21);
  const Polygon p = oracle::random_star(rng, 20, {0, 0}, 2.0, 5.0);
  REQUIRE(is_simple(p));
  std::uniform_real_distribution<double> u(-5, 5);
  long hits = 0;
  const long n = 1000000;
  for (long k = 0; k < n; ++k) hits += oracle::pnpoly(p.vertices, u(rng), u(rng));
  const double mc = 100.0 * static_cast<double>(hits) / static_cast<double>(n);
  CHECK(std::abs(polygon_area(p) - mc) <= 0.005 * polygon_area(p));
}

TEST_CASE("rasterize_polygon") {
  GridSpec g{{0, 0}, 1.0, 20, 20};
  const Polygon sq{{{2, 2}, {12, 2}, {12, 12}, {2, 12}}};
  CHECK(rasterize_polygon(sq, g).count() == 100);

  const Polygon shifted = translate(sq, {0.5, 0.5});
  const BinaryGrid m = rasterize_polygon(shifted, g);
  CHECK(m.count() >= 81);
  CHECK(m.count() <= 121);
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      const Point2 c = g.cell_center(i, j);
      CHECK(m.at(i, j) == oracle::pnpoly(shifted.vertices, c.x, c.y));
    }
  }

  // Triangle at 0.05 m cells.
  const Polygon tri{{{0.13, 0.21}, {3.9, 0.4}, {1.7, 2.85}}};
  GridSpec fine{{0, 0}, 0.05, 80, 60};
  const double area = static_cast<double>(rasterize_polygon(tri, fine).count()) * 0.05 * 0.05;
  CHECK(std::abs(area - polygon_area(tri)) <= 0.01 * polygon_area(tri));

  // Fully outside: all zero.
  CHECK(rasterize_polygon(translate(sq, {100, 100}), g).count() == 0);
}

TEST_CASE("rasterize_polygon matches per-pixel oracle on random polygons") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> cs(0.3, 1.7);
  for (int trial = 0; trial < 20; ++trial) {
    const Polygon p = oracle::random_star(rng, 12, {20, 20}, 5, 18);
    GridSpec g{{-0.3, 1.1}, cs(rng), 0, 0};
    g.width = static_cast<int>(45 / g.cell_size);
    g.height = static_cast<int>(45 / g.cell_size);
    const BinaryGrid m = rasterize_polygon(p, g);
    int mismatches = 0;
    for (int j = 0; j < g.height; ++j) {
      for (int i = 0; i < g.width; ++i) {
        const Point2 c = g.cell_center(i, j);
        mismatches += m.at(i, j) != oracle::pnpoly(p.vertices, c.x, c.y);
      }
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("dominant_angle") {
  const Polygon r{{{0, 0}, {4, 0}, {4, 2}, {0, 2}}};
  CHECK(dominant_angle(r) == doctest::Approx(0.0));
  CHECK(dominant_angle(rotate(r, 37.0)) == doctest::Approx(37.0));
  // L-shape whose unique longest edge is vertical.
  const Polygon l{{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 5}, {0, 5}}};
  CHECK(dominant_angle(l) == doctest::Approx(90.0));
  CHECK_THROWS_AS(dominant_angle(Polygon{{{1, 1}, {1, 1}}}), Error);
}

TEST_CASE("douglas_peucker") {
  std::vector<Point2> line;
  for (int i = 0; i < 10; ++i) line.push_back({double(i), 2.0 * i});
  const auto s = douglas_peucker(line, 0.1);
  REQUIRE(s.size() == 2);
  CHECK(s.front() == line.front());
  CHECK(s.back() == line.back());

  const std::vector<Point2> spike{{0, 0}, {1, 0}, {2, 5}, {3, 0}, {4, 0}};
  const auto ss = douglas_peucker(spike, 1.0);
  CHECK(std::find(ss.begin(), ss.end(), Point2{2, 5}) != ss.end());

  // Noisy rectangle boundary: every dropped point within tol of the chain.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  std::vector<Point2> rect;
  for (int i = 0; i <= 40; ++i) rect.push_back({double(i), noise(rng)});
  for (int i = 1; i <= 20; ++i) rect.push_back({40 + noise(rng), double(i)});
  for (int i = 39; i >= 0; --i) rect.push_back({double(i), 20 + noise(rng)});
  const auto simp = douglas_peucker(rect, 1.0);
  for (const auto& p : rect) {
    double best = 1e300;
    for (std::size_t k = 0; k + 1 < simp.size(); ++k) best = std::min(best, point_segment_distance(p, simp[k], simp[k + 1]));
    CHECK(best <= 1.0);
  }
  CHECK(douglas_peucker(rect, 1e-12).size() == rect.size());
}

TEST_CASE("wkt round trip") {
  const Polygon p{{{1.5, 2.25}, {10, 2}, {7.125, -3}}};
  const std::string w = to_wkt(p);
  CHECK(w == "POLYGON((1.500000 2.250000, 10.000000 2.000000, 7.125000 -3.000000, 1.500000 2.250000))");
  CHECK(parse_wkt(w).vertices == p.vertices);
  CHECK_THROWS_AS(parse_wkt("POLYGON((1 2, 3"), Error);
}

TEST_CASE("properties on random inputs") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = random_points(rng, 25, -10, 10);
    const Polygon hull = convex_hull(pts);
    // Convexity: all turns left.
    for (std::size_t k = 0; k < hull.size(); ++k) {
      CHECK(orient(hull.vertices[k], hull.vertices[(k + 1) % hull.size()], hull.vertices[(k + 2) % hull.size()]) > 0);
    }
    // MBR no larger than the axis-aligned box.
    CHECK(min_area_rect(pts).area() <= oracle::box_area_at(pts, 0.0) + 1e-9);

    // Area is invariant under rigid motion.
    const Polygon star = oracle::random_star(rng, 15, {0, 0}, 1, 4);
    const double a = polygon_area(star);
    const Polygon moved = translate(rotate(star, 73.0, {1, 2}), {5, -8});
    CHECK(std::abs(polygon_area(moved) - a) <= 1e-9 * a);

    // Dominant angle follows rotation.
    const double theta = std::uniform_real_distribution<double>(0, 360)(rng);
    const double expect = std::fmod(dominant_angle(star) + theta, 180.0);
    const double got = dominant_angle(rotate(star, theta));
    const double diff = std::abs(got - expect);
    CHECK(std::min(diff, 180.0 - diff) <= 1e-6);

    // Hausdorff triangle inequality.
    const auto a1 = random_points(rng, 10, 0, 5), b1 = random_points(rng, 12, 0, 5), c1 = random_points(rng, 8, 0, 5);
    CHECK(hausdorff_distance(a1, c1) <= hausdorff_distance(a1, b1) + hausdorff_distance(b1, c1) + 1e-12);
  }
}

}  // TEST_SUITE
