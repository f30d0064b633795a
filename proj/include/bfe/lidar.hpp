#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bfe/geometry.hpp"
#include "bfe/raster.hpp"
#include "bfe/registration.hpp"

namespace bfe {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

/// LiDAR returns in meters. `classes` is either empty or parallel to `points`.
struct PointCloud3D {
  std::vector<Point3> points;
  std::vector<int> classes;

  bool has_classes() const { return !classes.empty(); }
  std::size_t size() const { return points.size(); }
  void push_back(Point3 p, std::optional<int> cls = std::nullopt);
};

/// Text format: `x y z [class]` per line, '#' comments allowed.
PointCloud3D parse_xyz(std::string_view text);
std::string format_xyz(const PointCloud3D& cloud);

struct GroundParams {
  int ground_class = 2;
  double tile_size = 10.0;        // m, fallback tiling
  double lowest_fraction = 0.1;   // fallback: lowest decile per tile
  double min_offset = 2.5;        // m
};

struct GroundSplit {
  PointCloud3D ground;
  PointCloud3D nonground;
  double threshold = 0.0;  // T_e
};

/// T_e = mean(z_G) + max(min_offset, std(z_G)); points above T_e are non-ground.
GroundSplit separate_ground(const PointCloud3D& cloud, const GroundParams& params = {});

/// sqrt(2 / density): two expected returns per cell.
double cell_size_for_density(double density);

/// Vertical projection onto a grid aligned to multiples of the cell size,
/// padded by `padding` empty cells on every side. Empty input gives a 0x0 grid.
BinaryGrid project_to_grid(const PointCloud3D& nonground, double density, int padding = 2);

struct SegmentParams {
  /// Empty cells with at least this many of 8 set neighbours are set before
  /// opening (0 disables). Uniform scatter at two returns per cell leaves
  /// about e^-2 of roof cells empty.
  int fill_min_neighbors = 5;
  int opening_radius = 1;
  int connectivity = 8;
  double min_area_m2 = 10.0;
};

/// Sets empty cells having >= min_neighbors of their 8 neighbours set.
BinaryGrid fill_null_cells(const BinaryGrid& grid, int min_neighbors);

LabelGrid extract_building_segments(const BinaryGrid& grid, const SegmentParams& params = {});

/// Building id (segment label) -> its points. A point over a background
/// cell joins the nearest segment within `reach` cells (pass the opening
/// radius to recover returns on cells the opening shaved off); otherwise,
/// and outside the grid, it is dropped.
std::map<int, PointCloud3D> select_building_points(const PointCloud3D& nonground, const LabelGrid& labels,
                                                   const GridSpec& spec, int reach = 0);

struct BuildingBoundary3D {
  int building_id = 0;
  std::vector<Point3> boundary;  // xy convex hull, counter-clockwise
};

BuildingBoundary3D boundary_points(const PointCloud3D& points, int building_id = 0);

struct ProjectedBoundary {
  int building_id = 0;
  std::vector<Point2> pixels;
};

ProjectedBoundary project_boundary(const BuildingBoundary3D& b, const AffineTransform2D& t);

struct LidarParams {
  GroundParams ground;
  SegmentParams segments;
  double density = 2.0;  // points / m^2
};

/// Intermediate products kept for inspection.
struct LidarResult {
  GroundSplit split;
  BinaryGrid grid;
  LabelGrid labels;
  std::vector<BuildingBoundary3D> boundaries;  // ordered by building id
};

LidarResult extract_boundaries(const PointCloud3D& cloud, const LidarParams& params);

}  // namespace bfe
