#pragma once

#include <span>
#include <string>

#include "bfe/geometry.hpp"
#include "bfe/lidar.hpp"
#include "bfe/snake.hpp"

namespace bfe {

enum class ShapeLevel { Rectangle, LTZ, U };

const char* to_string(ShapeLevel level);

/// Where the building orientation comes from. Snake is the Dutter-style
/// baseline (MBR of the contour itself).
enum class OrientationSource { Lidar, Snake };

const char* to_string(OrientationSource source);
OrientationSource parse_orientation_source(const std::string& text);

struct BuildingPolygon {
  Polygon polygon;
  ShapeLevel shape_level = ShapeLevel::Rectangle;
  double orientation = 0.0;  // degrees, [0, 180)
};

struct PolygonizeParams {
  double tolerance = 0.10;  // symmetric difference / snake area accepted per level
  double trim = 0.25;       // fraction cut from each end before averaging
  double support_band = 4.0;  // px; snake points this close to an edge support it
  int min_notch = 2;          // px, smaller deficits are ignored
  OrientationSource orientation = OrientationSource::Lidar;
};

/// Minimum-area rectangle of the projected LiDAR boundary.
OrientedRect building_mbr(const ProjectedBoundary& init);

/// Mean of the values left after dropping floor(trim * n) from each end.
double trimmed_mean(std::vector<double> values, double trim);

/// Rectilinear fit in the frame of `mbr`: bounding rectangle, then one or
/// two corner notches (L/T/Z), then one edge notch (U). The lowest level
/// within tolerance of the rasterized snake wins, else the closest candidate.
BuildingPolygon fit_rectilinear(const SnakeContour& snake, const OrientedRect& mbr,
                                const PolygonizeParams& params = {});

/// fit_rectilinear with the MBR taken from `init` or from the snake,
/// according to params.orientation.
BuildingPolygon polygonize(const SnakeContour& snake, const ProjectedBoundary& init,
                           const PolygonizeParams& params = {});

/// Douglas-Peucker simplification of the closed snake; no regularization.
Polygon polygonize_douglas_peucker(const SnakeContour& snake, double tolerance);

}  // namespace bfe
