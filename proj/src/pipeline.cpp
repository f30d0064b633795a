#include "bfe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bfe/error.hpp"

namespace bfe {
namespace {

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

}  // namespace

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), "[" + stage + "] " + cause.what()), stage_(std::move(stage)) {}

double estimate_density(const PointCloud3D& cloud) {
  if (cloud.points.size() < 3) fail(ErrorKind::DegenerateInput, "cannot estimate density from fewer than 3 points");
  double xmin = cloud.points[0].x, xmax = xmin, ymin = cloud.points[0].y, ymax = ymin;
  for (const auto& p : cloud.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double area = (xmax - xmin) * (ymax - ymin);
  if (!(area > 0)) fail(ErrorKind::DegenerateInput, "cannot estimate density: points span zero area");
  return static_cast<double>(cloud.points.size()) / area;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

ExtractResult extract_footprints(const GrayImage& image, const PointCloud3D& cloud, const AffineTransform2D& transform,
                                 const RunConfig& config) {
  validate(config);
  ExtractResult out;
  LidarParams lp = config.lidar;
  if (lp.density <= 0) lp.density = in_stage("lidar", [&] { return estimate_density(cloud); });
  out.density = lp.density;
  out.lidar = in_stage("lidar", [&] { return extract_boundaries(cloud, lp); });
  if (out.lidar.split.nonground.points.empty()) {
    out.warnings.push_back("no non-ground points above T_e = " + std::to_string(out.lidar.split.threshold) +
                           "; no buildings extracted");
    return out;
  }
  if (out.lidar.boundaries.empty()) out.warnings.push_back("no building segments survived filtering");

  out.field = in_stage("energy", [&] { return external_field(image, config.snake); });
  out.buildings.resize(out.lidar.boundaries.size());
  parallel_for(out.buildings.size(), config.workers, [&](std::size_t i) {
    BuildingResult& b = out.buildings[i];
    const BuildingBoundary3D& boundary = out.lidar.boundaries[i];
    b.id = boundary.building_id;
    b.init = in_stage("project", [&] { return project_boundary(boundary, transform); });
    b.snake = in_stage("snake", [&] { return run_snake(b.init, out.field, image.width, image.height, config.snake); });
    b.polygon = in_stage("polygonize", [&] { return polygonize(b.snake.contour, b.init, config.polygonize); });
    for (const auto& v : b.polygon.polygon.vertices) b.footprint.vertices.push_back(config.pixel_size * v);
  });
  return out;
}

}  // namespace bfe
