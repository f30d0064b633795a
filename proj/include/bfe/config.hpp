#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bfe/lidar.hpp"
#include "bfe/polygonize.hpp"
#include "bfe/snake.hpp"

namespace bfe {

struct RunPaths {
  std::string image;
  std::string cloud;
  std::string transform;
  std::string truth;  // optional; enables evaluation and the truth layer of the overlay
  std::string outdir;
};

struct RunConfig {
  RunPaths paths;
  SnakeConfig snake;
  LidarParams lidar;           // lidar.density <= 0 means: estimate from the cloud
  PolygonizeParams polygonize;
  double pixel_size = 0.15;    // m / px of the image; output WKT is in meters
  double eval_cell_size = 0.0; // 0 = pixel_size
  int workers = 0;             // 0 = hardware concurrency
  bool svg = false;
  std::string debug_dir;
};

/// Flat keys (alpha, beta, ..., opening_radius, min_segment_area_m2, ...)
/// plus a "paths" object. Unknown keys are rejected. Starts from `base`.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);
RunConfig load_run_config(const std::filesystem::path& path);

/// Range checks; throws ErrorKind::InvalidArgument naming the key.
void validate(const RunConfig& c);

}  // namespace bfe
