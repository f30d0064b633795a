#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bfe {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
/// z-component of (b - a) x (c - a); positive for a counter-clockwise turn.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }
inline double norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Rotation by `degrees` about `pivot` (counter-clockwise in a y-up frame).
Point2 rotate(Point2 p, double degrees, Point2 pivot = {});

/// Closed polygon; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
};

/// Oriented rectangle. `angle` is the direction of the half_width axis in
/// degrees, canonical range [0, 180).
struct OrientedRect {
  Point2 center;
  double half_width = 0.0;
  double half_height = 0.0;
  double angle = 0.0;

  double area() const { return 4.0 * half_width * half_height; }
  Polygon to_polygon() const;
};

/// Raster frame: cell (i, j) covers [origin + i*cell, origin + (i+1)*cell)
/// along each axis; its center sits at offset (i + 0.5) * cell.
struct GridSpec {
  Point2 origin;
  double cell_size = 1.0;
  int width = 0;
  int height = 0;

  Point2 cell_center(int i, int j) const {
    return {origin.x + (i + 0.5) * cell_size, origin.y + (j + 0.5) * cell_size};
  }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Row-major occupancy over a GridSpec (1 = set).
struct BinaryGrid {
  GridSpec grid;
  std::vector<std::uint8_t> cells;

  bool at(int i, int j) const { return cells[static_cast<std::size_t>(j) * grid.width + i] != 0; }
  std::size_t count() const;
};

double normalize_degrees_180(double deg);

Polygon convex_hull(std::span<const Point2> points);
/// Indices into `points` of the hull vertices, counter-clockwise.
std::vector<std::size_t> convex_hull_indices(std::span<const Point2> points);

OrientedRect min_area_rect(std::span<const Point2> points);

double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b);
/// sup over a of the distance to the nearest point of b.
double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b);

double signed_area(const Polygon& p);
double polygon_area(const Polygon& p);
Point2 polygon_centroid(const Polygon& p);
double polygon_perimeter(const Polygon& p);
bool is_simple(const Polygon& p);
bool point_in_polygon(const Polygon& p, Point2 q);

BinaryGrid rasterize_polygon(const Polygon& p, const GridSpec& grid);

double dominant_angle(const Polygon& p);

std::vector<Point2> douglas_peucker(std::span<const Point2> line, double tol);
/// Douglas-Peucker on a closed ring, split at the vertex farthest from the
/// first one. Returns the simplified ring without repeating the start.
std::vector<Point2> douglas_peucker_closed(std::span<const Point2> ring, double tol);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Equally spaced samples along a closed polyline, starting at vertex 0.
std::vector<Point2> resample_closed(std::span<const Point2> ring, std::size_t count);

Polygon translate(const Polygon& p, Point2 offset);
Polygon rotate(const Polygon& p, double degrees, Point2 pivot = {});

std::string to_wkt(const Polygon& p);
Polygon parse_wkt(std::string_view text);

}  // namespace bfe
