#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bfe/geometry.hpp"
#include "bfe/lidar.hpp"
#include "bfe/raster.hpp"
#include "bfe/registration.hpp"

namespace bfe {

enum class ShapeKind { Rect, L, U, Gabled };

const char* to_string(ShapeKind kind);
ShapeKind parse_shape_kind(const std::string& text);

struct BuildingSpec {
  ShapeKind shape = ShapeKind::Rect;
  Polygon footprint;        // meters
  double roof_gray = 200;   // gabled: first roof plane
  double roof_gray2 = 200;  // gabled: second roof plane
  double height = 8;        // meters above terrain
};

/// Flat dark region drawn under the buildings.
struct ShadowSpec {
  Polygon footprint;
  double gray = 40;
};

struct SceneSpec {
  int width = 512;  // px
  int height = 512;
  double resolution = 0.15;  // m / px
  std::vector<BuildingSpec> buildings;
  std::vector<ShadowSpec> shadows;
  double background_gray = 90;
  double noise_sigma = 5;     // gray levels
  double lidar_density = 2;   // points / m^2
  Point2 misalignment{};      // m, residual registration error baked into the transform
  double terrain_noise = 0.3; // m, ground z ~ U[0, terrain_noise]
  std::uint64_t seed = 1;
  int ground_class = 2;
  int building_class = 6;
};

struct Scene {
  GrayImage image;
  PointCloud3D cloud;              // meters
  std::vector<Polygon> truth;      // meters
  AffineTransform2D transform;     // cloud meters -> image pixels
  std::vector<std::size_t> points_per_building;
};

void validate(const SceneSpec& spec);
/// Deterministic for a given spec (including the seed).
Scene generate_scene(const SceneSpec& spec);

/// Rectangle of size w x h (meters) centered at c, long side along `angle`.
Polygon rect_footprint(Point2 center, double w, double h, double angle_deg);
/// w x h rectangle with a notch_w x notch_h corner removed.
Polygon l_footprint(Point2 center, double w, double h, double notch_w, double notch_h, double angle_deg);
/// w x h rectangle with a notch_w x notch_h notch cut from the middle of one long side.
Polygon u_footprint(Point2 center, double w, double h, double notch_w, double notch_h, double angle_deg);

/// Five buildings (rect, L, U, low-contrast rect, two-tone gabled) on a
/// 512 x 512, 0.15 m/px image; 2 pts/m^2 LiDAR, 0.5 m misalignment, noise 5.
SceneSpec benchmark_scene(std::uint64_t seed = 7);

SceneSpec scene_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SceneSpec& spec);

}  // namespace bfe
