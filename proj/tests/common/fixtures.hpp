// Fixtures shared by the unit tests and the acceptance binary.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bfe/geometry.hpp"
#include "bfe/lidar.hpp"
#include "bfe/raster.hpp"
#include "bfe/snake.hpp"
#include "bfe/synthetic.hpp"

namespace fixture {

using bfe::Point2;

/// Energy field that is itself a step edge: 0 | 255 at x = w/2, blurred
/// with sigma 2.
inline bfe::Field step_edge_energy(int w = 64, int h = 16) {
  bfe::GrayImage img(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = w / 2; x < w; ++x) img.at(x, y) = 255;
  return bfe::gaussian_smooth(img, 2);
}

inline bfe::GrayImage disk_image(int n = 80, double r = 15) {
  bfe::GrayImage img(n, n, 20);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (std::hypot(x + 0.5 - n / 2.0, y + 0.5 - n / 2.0) <= r) img.at(x, y) = 230;
  return img;
}

inline bfe::GrayImage rect_image(int w, int h, double x0, double y0, double x1, double y1, double fg, double bg) {
  bfe::GrayImage img(w, h, bg);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x + 0.5 > x0 && x + 0.5 < x1 && y + 0.5 > y0 && y + 0.5 < y1) img.at(x, y) = fg;
  return img;
}

/// A snake and its LiDAR initialization for one building, in pixels.
struct PolygonizeCase {
  bfe::Polygon truth;
  bfe::SnakeContour snake;
  bfe::ProjectedBoundary init;
  double angle = 0;  // true orientation, degrees
};

inline std::vector<Point2> jitter(std::vector<Point2> pts, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  for (auto& p : pts) p = p + Point2{u(rng), u(rng)};
  return pts;
}

/// LiDAR-like hull: uniform samples inside `truth` at `per_px2` density.
inline bfe::ProjectedBoundary sampled_hull(const bfe::Polygon& truth, std::mt19937_64& rng, double per_px2) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& v : truth.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  const auto n = static_cast<long>(per_px2 * (xmax - xmin) * (ymax - ymin));
  std::vector<Point2> pts;
  for (long k = 0; k < n; ++k) {
    const Point2 p{ux(rng), uy(rng)};
    if (bfe::point_in_polygon(truth, p)) pts.push_back(p);
  }
  return {1, bfe::convex_hull(pts).vertices};
}

/// L-shaped building at `angle`, snake = outline with +-1 px noise.
inline PolygonizeCase noisy_l(std::uint64_t seed = 11, double angle = 23.0) {
  std::mt19937_64 rng(seed);
  PolygonizeCase c;
  c.angle = angle;
  // 120 x 80 px with a 50 x 35 corner removed; 0.15 m/px scale of a
  // medium house.
  c.truth = bfe::l_footprint({200, 200}, 120, 80, 50, 35, angle);
  c.snake.points = jitter(bfe::resample_closed(c.truth.vertices, 200), rng, 1.0);
  // 2 pts/m^2 at 0.15 m/px is 0.045 returns per px^2.
  c.init = sampled_hull(c.truth, rng, 0.045);
  return c;
}

/// Same L, but the snake is sheared so its long edges lean by `skew`
/// degrees, as happens when one wall has weak contrast. The LiDAR hull is
/// unaffected.
inline PolygonizeCase skewed_snake(std::uint64_t seed = 12, double angle = 23.0, double skew = 4.2) {
  PolygonizeCase c = noisy_l(seed, angle);
  std::mt19937_64 rng(seed + 1000);
  const Point2 center{200, 200};
  const double k = std::tan(skew * std::numbers::pi / 180.0);
  std::vector<Point2> sheared;
  for (const auto& p : bfe::resample_closed(c.truth.vertices, 200)) {
    // Shear along the building's short axis in its own frame.
    const Point2 q = bfe::rotate(p, -angle, center) - center;
    sheared.push_back(bfe::rotate(center + Point2{q.x, q.y + k * q.x}, angle, center));
  }
  c.snake.points = jitter(sheared, rng, 1.0);
  return c;
}

/// Orientation difference folded over the 90 degree symmetry of a
/// rectilinear outline.
inline double angle_error(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 90.0);
  return std::min(d, 90.0 - d);
}

}  // namespace fixture
