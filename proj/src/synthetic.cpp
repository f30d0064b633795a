#include "bfe/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bfe/error.hpp"

namespace bfe {

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Rect: return "rect";
    case ShapeKind::L: return "L";
    case ShapeKind::U: return "U";
    case ShapeKind::Gabled: return "gabled";
  }
  return "rect";
}

ShapeKind parse_shape_kind(const std::string& text) {
  if (text == "rect") return ShapeKind::Rect;
  if (text == "L") return ShapeKind::L;
  if (text == "U") return ShapeKind::U;
  if (text == "gabled" || text == "gabled-texture") return ShapeKind::Gabled;
  fail(ErrorKind::InvalidArgument, "unknown building shape '" + text + "' (expected rect|L|U|gabled)");
}

namespace {

// std::mt19937_64 output is fully specified by the standard; distributions
// are not, so uniform and normal deviates are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Polygon place(std::vector<Point2> local, Point2 center, double angle_deg) {
  Polygon p;
  for (const auto& v : local) p.vertices.push_back(rotate(v, angle_deg) + center);
  return p;
}

}  // namespace

Polygon rect_footprint(Point2 center, double w, double h, double angle_deg) {
  const double a = w / 2, b = h / 2;
  return place({{-a, -b}, {a, -b}, {a, b}, {-a, b}}, center, angle_deg);
}

Polygon l_footprint(Point2 center, double w, double h, double notch_w, double notch_h, double angle_deg) {
  if (!(notch_w > 0 && notch_w < w && notch_h > 0 && notch_h < h)) {
    fail(ErrorKind::InvalidArgument, "l_footprint: notch must be smaller than the footprint");
  }
  const double a = w / 2, b = h / 2;
  return place({{-a, -b}, {a, -b}, {a, b - notch_h}, {a - notch_w, b - notch_h}, {a - notch_w, b}, {-a, b}}, center,
               angle_deg);
}

Polygon u_footprint(Point2 center, double w, double h, double notch_w, double notch_h, double angle_deg) {
  if (!(notch_w > 0 && notch_w < w && notch_h > 0 && notch_h < h)) {
    fail(ErrorKind::InvalidArgument, "u_footprint: notch must be smaller than the footprint");
  }
  const double a = w / 2, b = h / 2, n = notch_w / 2;
  return place({{-a, -b}, {a, -b}, {a, b}, {n, b}, {n, b - notch_h}, {-n, b - notch_h}, {-n, b}, {-a, b}}, center,
               angle_deg);
}

void validate(const SceneSpec& s) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::InvalidArgument, "scene spec: " + what);
  };
  require(s.width >= 8 && s.height >= 8, "image must be at least 8x8 pixels");
  require(s.resolution > 0, "resolution must be positive");
  require(s.lidar_density > 0, "lidar_density must be positive");
  require(s.noise_sigma >= 0, "noise_sigma must be >= 0");
  require(s.terrain_noise >= 0, "terrain_noise must be >= 0");
  require(std::isfinite(s.misalignment.x) && std::isfinite(s.misalignment.y), "misalignment must be finite");
  const double xmax = s.width * s.resolution;
  const double ymax = s.height * s.resolution;
  for (std::size_t i = 0; i < s.buildings.size(); ++i) {
    const auto& b = s.buildings[i];
    require(b.footprint.size() >= 3 && is_simple(b.footprint), "building " + std::to_string(i + 1) + " footprint is not a simple polygon");
    for (const auto& v : b.footprint.vertices) {
      require(v.x >= 0 && v.y >= 0 && v.x <= xmax && v.y <= ymax,
              "building " + std::to_string(i + 1) + " footprint leaves the scene");
    }
    require(b.height > s.terrain_noise, "building " + std::to_string(i + 1) + " must rise above the terrain");
  }
}

Scene generate_scene(const SceneSpec& spec) {
  validate(spec);
  Scene scene;
  const GridSpec pixels{{0.0, 0.0}, spec.resolution, spec.width, spec.height};
  scene.image = GrayImage(spec.width, spec.height, spec.background_gray);

  for (const auto& s : spec.shadows) {
    const BinaryGrid m = rasterize_polygon(s.footprint, pixels);
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      if (m.cells[i]) scene.image.data[i] = s.gray;
    }
  }
  for (const auto& b : spec.buildings) {
    const BinaryGrid m = rasterize_polygon(b.footprint, pixels);
    // Gabled roofs: two planes split by the ridge along the long axis.
    OrientedRect frame;
    if (b.shape == ShapeKind::Gabled) frame = min_area_rect(b.footprint.vertices);
    const bool long_is_width = frame.half_width >= frame.half_height;
    const double ang = frame.angle * std::numbers::pi / 180.0;
    const Point2 across = long_is_width ? Point2{-std::sin(ang), std::cos(ang)} : Point2{std::cos(ang), std::sin(ang)};
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        if (!m.at(x, y)) continue;
        double gray = b.roof_gray;
        if (b.shape == ShapeKind::Gabled && dot(pixels.cell_center(x, y) - frame.center, across) >= 0) {
          gray = b.roof_gray2;
        }
        scene.image.at(x, y) = gray;
      }
    }
  }

  Rng rng(spec.seed);
  for (double& v : scene.image.data) {
    if (spec.noise_sigma > 0) v += spec.noise_sigma * rng.normal();
    v = std::clamp(std::round(v), 0.0, 255.0);
  }

  const double xmax = spec.width * spec.resolution;
  const double ymax = spec.height * spec.resolution;
  const auto count = static_cast<std::size_t>(std::llround(spec.lidar_density * xmax * ymax));
  scene.points_per_building.assign(spec.buildings.size(), 0);
  scene.cloud.points.reserve(count);
  scene.cloud.classes.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Point2 p{rng.uniform() * xmax, rng.uniform() * ymax};
    const double terrain = rng.uniform() * spec.terrain_noise;
    int owner = -1;
    for (std::size_t b = 0; b < spec.buildings.size() && owner < 0; ++b) {
      if (point_in_polygon(spec.buildings[b].footprint, p)) owner = static_cast<int>(b);
    }
    if (owner >= 0) {
      ++scene.points_per_building[static_cast<std::size_t>(owner)];
      scene.cloud.push_back({p.x, p.y, terrain + spec.buildings[static_cast<std::size_t>(owner)].height},
                            spec.building_class);
    } else {
      scene.cloud.push_back({p.x, p.y, terrain}, spec.ground_class);
    }
  }

  for (const auto& b : spec.buildings) scene.truth.push_back(b.footprint);
  const double inv = 1.0 / spec.resolution;
  scene.transform = {inv, 0.0, 0.0, inv, spec.misalignment.x * inv, spec.misalignment.y * inv};
  return scene;
}

SceneSpec benchmark_scene(std::uint64_t seed) {
  SceneSpec s;
  s.seed = seed;
  s.misalignment = {0.5 / std::numbers::sqrt2, 0.5 / std::numbers::sqrt2};
  s.buildings = {
      {ShapeKind::Rect, rect_footprint({15.0, 14.0}, 15.0, 9.5, 20.0), 190, 190, 8.0},
      {ShapeKind::L, l_footprint({53.0, 15.0}, 16.0, 14.0, 7.0, 6.5, 8.0), 200, 200, 10.0},
      {ShapeKind::U, u_footprint({16.0, 44.0}, 18.0, 13.0, 6.5, 6.0, 172.0), 175, 175, 9.0},
      {ShapeKind::Rect, rect_footprint({54.0, 44.0}, 14.0, 10.0, 35.0), 118, 118, 7.0},
      {ShapeKind::Gabled, rect_footprint({36.0, 66.0}, 17.0, 10.0, 160.0), 165, 215, 9.0},
  };
  return s;
}

namespace {

Polygon footprint_from_json(const nlohmann::json& b, ShapeKind kind) {
  if (b.contains("footprint")) return parse_wkt(b.at("footprint").get<std::string>());
  const auto c = b.at("center");
  const auto size = b.at("size");
  const Point2 center{c.at(0).get<double>(), c.at(1).get<double>()};
  const double w = size.at(0).get<double>();
  const double h = size.at(1).get<double>();
  const double angle = b.value("angle", 0.0);
  switch (kind) {
    case ShapeKind::L:
    case ShapeKind::U: {
      const auto n = b.at("notch");
      const double nw = n.at(0).get<double>(), nh = n.at(1).get<double>();
      return kind == ShapeKind::L ? l_footprint(center, w, h, nw, nh, angle) : u_footprint(center, w, h, nw, nh, angle);
    }
    case ShapeKind::Rect:
    case ShapeKind::Gabled:
      return rect_footprint(center, w, h, angle);
  }
  return {};
}

}  // namespace

SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  try {
    SceneSpec s;
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.resolution = j.value("resolution", s.resolution);
    s.background_gray = j.value("background_gray", s.background_gray);
    s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
    s.lidar_density = j.value("lidar_density", s.lidar_density);
    s.terrain_noise = j.value("terrain_noise", s.terrain_noise);
    s.seed = j.value("seed", s.seed);
    s.ground_class = j.value("ground_class", s.ground_class);
    s.building_class = j.value("building_class", s.building_class);
    if (j.contains("misalignment")) {
      s.misalignment = {j["misalignment"].at(0).get<double>(), j["misalignment"].at(1).get<double>()};
    }
    for (const auto& b : j.value("buildings", nlohmann::json::array())) {
      BuildingSpec bs;
      bs.shape = parse_shape_kind(b.value("shape", std::string("rect")));
      bs.footprint = footprint_from_json(b, bs.shape);
      bs.roof_gray = b.value("roof_gray", bs.roof_gray);
      bs.roof_gray2 = b.value("roof_gray2", bs.roof_gray);
      bs.height = b.value("height", bs.height);
      s.buildings.push_back(std::move(bs));
    }
    for (const auto& sh : j.value("shadows", nlohmann::json::array())) {
      s.shadows.push_back({parse_wkt(sh.at("footprint").get<std::string>()), sh.value("gray", 40.0)});
    }
    validate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("scene spec: ") + e.what());
  }
}

nlohmann::json to_json(const SceneSpec& s) {
  nlohmann::json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["resolution"] = s.resolution;
  j["background_gray"] = s.background_gray;
  j["noise_sigma"] = s.noise_sigma;
  j["lidar_density"] = s.lidar_density;
  j["terrain_noise"] = s.terrain_noise;
  j["seed"] = s.seed;
  j["ground_class"] = s.ground_class;
  j["building_class"] = s.building_class;
  j["misalignment"] = {s.misalignment.x, s.misalignment.y};
  j["buildings"] = nlohmann::json::array();
  for (const auto& b : s.buildings) {
    j["buildings"].push_back({{"shape", to_string(b.shape)},
                              {"footprint", to_wkt(b.footprint)},
                              {"roof_gray", b.roof_gray},
                              {"roof_gray2", b.roof_gray2},
                              {"height", b.height}});
  }
  j["shadows"] = nlohmann::json::array();
  for (const auto& sh : s.shadows) j["shadows"].push_back({{"footprint", to_wkt(sh.footprint)}, {"gray", sh.gray}});
  return j;
}

}  // namespace bfe
