#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bfe/config.hpp"
#include "bfe/error.hpp"
#include "bfe/lidar.hpp"
#include "bfe/polygonize.hpp"
#include "bfe/raster.hpp"
#include "bfe/registration.hpp"
#include "bfe/snake.hpp"

namespace bfe {

/// Error raised inside a named pipeline stage ("lidar", "snake", ...).
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct BuildingResult {
  int id = 0;
  ProjectedBoundary init;  // image pixels
  SnakeRun snake;
  BuildingPolygon polygon;  // image pixels
  Polygon footprint;        // meters (pixel * pixel_size)
};

struct ExtractResult {
  LidarResult lidar;
  double density = 0.0;  // points / m^2 actually used
  VectorField field;
  std::vector<BuildingResult> buildings;  // ordered by id
  std::vector<std::string> warnings;
};

/// Points per square meter over the xy bounding box.
double estimate_density(const PointCloud3D& cloud);

/// Runs fn(0..count-1) on up to `workers` threads (0 = hardware
/// concurrency). Exceptions are rethrown for the lowest failing index.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// LiDAR boundaries -> projection -> snake -> polygonization. Every
/// building is processed independently, so the result does not depend on
/// the worker count.
ExtractResult extract_footprints(const GrayImage& image, const PointCloud3D& cloud, const AffineTransform2D& transform,
                                 const RunConfig& config);

}  // namespace bfe
