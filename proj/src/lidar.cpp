#include "bfe/lidar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "bfe/error.hpp"

namespace bfe {

void PointCloud3D::push_back(Point3 p, std::optional<int> cls) {
  if (cls.has_value() != has_classes() && !points.empty()) {
    fail(ErrorKind::InvalidArgument, "point cloud: class labels must be given for all points or none");
  }
  points.push_back(p);
  if (cls) classes.push_back(*cls);
}

PointCloud3D parse_xyz(std::string_view text) {
  PointCloud3D cloud;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    double v[4];
    int got = 0;
    std::size_t i = 0;
    while (true) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == ',')) ++i;
      if (i >= line.size()) break;
      if (got == 4) fail(ErrorKind::Parse, "point cloud: line " + std::to_string(lineno) + " has more than 4 fields");
      const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v[got]);
      if (ec != std::errc{}) fail(ErrorKind::Parse, "point cloud: line " + std::to_string(lineno) + " has a malformed number");
      i = static_cast<std::size_t>(ptr - line.data());
      ++got;
    }
    if (got == 0) continue;
    if (got < 3) fail(ErrorKind::Parse, "point cloud: line " + std::to_string(lineno) + " needs `x y z [class]`");
    const Point3 p{v[0], v[1], v[2]};
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      fail(ErrorKind::Parse, "point cloud: line " + std::to_string(lineno) + " has a non-finite coordinate");
    }
    std::optional<int> cls;
    if (got == 4) cls = static_cast<int>(v[3]);
    if (!cloud.points.empty() && cls.has_value() != cloud.has_classes()) {
      fail(ErrorKind::Parse, "point cloud: line " + std::to_string(lineno) + " mixes labeled and unlabeled points");
    }
    cloud.push_back(p, cls);
  }
  return cloud;
}

std::string format_xyz(const PointCloud3D& cloud) {
  std::string out;
  out.reserve(cloud.size() * 32);
  char buf[128];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    if (cloud.has_classes()) {
      std::snprintf(buf, sizeof buf, "%.4f %.4f %.4f %d\n", p.x, p.y, p.z, cloud.classes[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%.4f %.4f %.4f\n", p.x, p.y, p.z);
    }
    out += buf;
  }
  return out;
}

namespace {

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats population_stats(const std::vector<double>& z) {
  Stats s;
  s.mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
  double acc = 0.0;
  for (double v : z) acc += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(acc / static_cast<double>(z.size()));
  return s;
}

// Ground elevation samples when no classes are available: the lowest
// `fraction` of returns (at least one) in every occupied tile.
std::vector<double> lowest_per_tile(const PointCloud3D& cloud, const GroundParams& p) {
  std::map<std::pair<long, long>, std::vector<double>> tiles;
  for (const auto& q : cloud.points) {
    tiles[{static_cast<long>(std::floor(q.x / p.tile_size)), static_cast<long>(std::floor(q.y / p.tile_size))}]
        .push_back(q.z);
  }
  std::vector<double> out;
  for (auto& [key, zs] : tiles) {
    std::sort(zs.begin(), zs.end());
    const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(p.lowest_fraction * zs.size())));
    out.insert(out.end(), zs.begin(), zs.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  return out;
}

}  // namespace

GroundSplit separate_ground(const PointCloud3D& cloud, const GroundParams& params) {
  if (cloud.points.empty()) fail(ErrorKind::InvalidArgument, "separate_ground: empty point cloud");
  if (!(params.tile_size > 0) || !(params.lowest_fraction > 0) || params.lowest_fraction > 1) {
    fail(ErrorKind::InvalidArgument, "separate_ground: invalid ground parameters");
  }
  std::vector<double> zg;
  if (cloud.has_classes()) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (cloud.classes[i] == params.ground_class) zg.push_back(cloud.points[i].z);
    }
    if (zg.empty()) {
      fail(ErrorKind::DegenerateInput,
           "separate_ground: no points with ground class " + std::to_string(params.ground_class));
    }
  } else {
    zg = lowest_per_tile(cloud, params);
  }
  const Stats s = population_stats(zg);

  GroundSplit out;
  out.threshold = s.mean + std::max(params.min_offset, s.stddev);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    auto& dst = cloud.points[i].z > out.threshold ? out.nonground : out.ground;
    dst.push_back(cloud.points[i], cloud.has_classes() ? std::optional<int>(cloud.classes[i]) : std::nullopt);
  }
  return out;
}

double cell_size_for_density(double density) {
  if (!(density > 0) || !std::isfinite(density)) fail(ErrorKind::InvalidArgument, "point density must be positive");
  return std::sqrt(2.0 / density);
}

BinaryGrid project_to_grid(const PointCloud3D& nonground, double density, int padding) {
  const double cs = cell_size_for_density(density);
  BinaryGrid grid;
  grid.grid.cell_size = cs;
  if (nonground.points.empty()) return grid;

  double xmin = nonground.points[0].x, xmax = xmin, ymin = nonground.points[0].y, ymax = ymin;
  for (const auto& p : nonground.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const long i0 = static_cast<long>(std::floor(xmin / cs)) - padding;
  const long j0 = static_cast<long>(std::floor(ymin / cs)) - padding;
  const long i1 = static_cast<long>(std::floor(xmax / cs)) + padding;
  const long j1 = static_cast<long>(std::floor(ymax / cs)) + padding;
  grid.grid.origin = {static_cast<double>(i0) * cs, static_cast<double>(j0) * cs};
  grid.grid.width = static_cast<int>(i1 - i0 + 1);
  grid.grid.height = static_cast<int>(j1 - j0 + 1);
  grid.cells.assign(static_cast<std::size_t>(grid.grid.width) * grid.grid.height, 0);
  for (const auto& p : nonground.points) {
    const long i = static_cast<long>(std::floor(p.x / cs)) - i0;
    const long j = static_cast<long>(std::floor(p.y / cs)) - j0;
    grid.cells[static_cast<std::size_t>(j) * grid.grid.width + static_cast<std::size_t>(i)] = 1;
  }
  return grid;
}

BinaryGrid fill_null_cells(const BinaryGrid& grid, int min_neighbors) {
  BinaryGrid out = grid;
  if (min_neighbors <= 0) return out;
  const int w = grid.grid.width;
  const int h = grid.grid.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (grid.at(x, y)) continue;
      int set = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          set += (dx || dy) && xx >= 0 && yy >= 0 && xx < w && yy < h && grid.at(xx, yy);
        }
      }
      if (set >= min_neighbors) out.cells[static_cast<std::size_t>(y) * w + x] = 1;
    }
  }
  return out;
}

LabelGrid extract_building_segments(const BinaryGrid& grid, const SegmentParams& params) {
  const BinaryGrid opened = morphological_open(fill_null_cells(grid, params.fill_min_neighbors), params.opening_radius);
  LabelGrid labels = connected_components(opened, params.connectivity);

  std::vector<std::size_t> cells(static_cast<std::size_t>(labels.count) + 1, 0);
  for (auto l : labels.labels) ++cells[static_cast<std::size_t>(l)];
  const double cell_area = grid.grid.cell_size * grid.grid.cell_size;

  // Drop small segments and compact the survivors, keeping first-touch order.
  std::vector<std::int32_t> remap(cells.size(), 0);
  int next = 0;
  for (std::size_t l = 1; l < cells.size(); ++l) {
    if (static_cast<double>(cells[l]) * cell_area >= params.min_area_m2) remap[l] = ++next;
  }
  for (auto& l : labels.labels) l = remap[static_cast<std::size_t>(l)];
  labels.count = next;
  return labels;
}

namespace {

// Label of (i, j), else the closest labelled cell within the disk of radius
// `reach` (smallest label on ties).
int nearest_label(const LabelGrid& labels, int i, int j, int reach) {
  if (const int l = labels.at(i, j); l != 0 || reach <= 0) return l;
  int best = 0, best_d = 0;
  for (const auto& [dx, dy] : disk_offsets(reach)) {
    const int x = i + dx, y = j + dy;
    if (x < 0 || y < 0 || x >= labels.width || y >= labels.height) continue;
    const int l = labels.at(x, y);
    const int d = dx * dx + dy * dy;
    if (l != 0 && (best == 0 || d < best_d || (d == best_d && l < best))) {
      best = l;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

std::map<int, PointCloud3D> select_building_points(const PointCloud3D& nonground, const LabelGrid& labels,
                                                   const GridSpec& spec, int reach) {
  if (labels.width != spec.width || labels.height != spec.height ||
      labels.labels.size() != static_cast<std::size_t>(spec.width) * spec.height) {
    fail(ErrorKind::InvalidArgument, "select_building_points: label grid does not match grid spec");
  }
  std::map<int, PointCloud3D> out;
  const double cs = spec.cell_size;
  for (std::size_t k = 0; k < nonground.size(); ++k) {
    const auto& p = nonground.points[k];
    const long i = static_cast<long>(std::floor((p.x - spec.origin.x) / cs));
    const long j = static_cast<long>(std::floor((p.y - spec.origin.y) / cs));
    if (i < 0 || j < 0 || i >= spec.width || j >= spec.height) continue;
    const int label = nearest_label(labels, static_cast<int>(i), static_cast<int>(j), reach);
    if (label == 0) continue;
    out[label].push_back(p, nonground.has_classes() ? std::optional<int>(nonground.classes[k]) : std::nullopt);
  }
  return out;
}

BuildingBoundary3D boundary_points(const PointCloud3D& points, int building_id) {
  std::vector<Point2> xy;
  xy.reserve(points.size());
  for (const auto& p : points.points) xy.push_back({p.x, p.y});
  BuildingBoundary3D out;
  out.building_id = building_id;
  for (std::size_t i : convex_hull_indices(xy)) out.boundary.push_back(points.points[i]);
  return out;
}

ProjectedBoundary project_boundary(const BuildingBoundary3D& b, const AffineTransform2D& t) {
  ProjectedBoundary out;
  out.building_id = b.building_id;
  out.pixels.reserve(b.boundary.size());
  for (const auto& p : b.boundary) out.pixels.push_back(apply(t, Point2{p.x, p.y}));
  return out;
}

LidarResult extract_boundaries(const PointCloud3D& cloud, const LidarParams& params) {
  LidarResult r;
  r.split = separate_ground(cloud, params.ground);
  r.grid = project_to_grid(r.split.nonground, params.density);
  if (r.split.nonground.points.empty()) {
    r.labels = LabelGrid{};
    return r;
  }
  r.labels = extract_building_segments(r.grid, params.segments);
  for (const auto& [id, pts] : select_building_points(r.split.nonground, r.labels, r.grid.grid,
                                                      params.segments.opening_radius)) {
    try {
      r.boundaries.push_back(boundary_points(pts, id));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateInput) throw;
      // A segment whose returns are collinear has no footprint; skip it.
    }
  }
  return r;
}

}  // namespace bfe
