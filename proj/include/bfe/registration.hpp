#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "bfe/geometry.hpp"

namespace bfe {

/// (x, y) -> (a*x + b*y + tx, c*x + d*y + ty). In the pipeline it maps
/// LiDAR meters to image pixels.
struct AffineTransform2D {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0, tx = 0.0, ty = 0.0;

  static AffineTransform2D identity() { return {}; }
  static AffineTransform2D translation(double dx, double dy) { return {1, 0, 0, 1, dx, dy}; }
  static AffineTransform2D scale(double s) { return {s, 0, 0, s, 0, 0}; }
  static AffineTransform2D rotation(double degrees);

  double determinant() const { return a * d - b * c; }
  bool valid() const;
  AffineTransform2D inverse() const;
  /// (*this) after `first`.
  AffineTransform2D compose(const AffineTransform2D& first) const;
};

Point2 apply(const AffineTransform2D& t, Point2 p);
Polygon apply(const AffineTransform2D& t, const Polygon& p);

using Correspondence = std::pair<Point2, Point2>;  // source, target

/// Least-squares affine fit; exact for noise-free affine pairs.
AffineTransform2D fit_least_squares(std::span<const Correspondence> pairs);

/// One line: `a b c d tx ty`.
AffineTransform2D parse_transform(std::string_view text);
std::string format_transform(const AffineTransform2D& t);

/// One `sx sy tx ty` pair per line; '#' comments allowed.
std::vector<Correspondence> parse_correspondences(std::string_view text);

}  // namespace bfe
