#include "bfe/config.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "bfe/error.hpp"
#include "bfe/pnm.hpp"

namespace bfe {
namespace {

using json = nlohmann::json;

struct Key {
  std::function<void(const json&, RunConfig&)> read;
  std::function<json(const RunConfig&)> write;
};

template <class T>
Key field(T RunConfig::*outer) {
  return {[outer](const json& v, RunConfig& c) { c.*outer = v.get<T>(); },
          [outer](const RunConfig& c) { return json(c.*outer); }};
}

template <class Outer, class T>
Key nested(Outer RunConfig::*outer, T Outer::*inner) {
  return {[outer, inner](const json& v, RunConfig& c) { (c.*outer).*inner = v.get<T>(); },
          [outer, inner](const RunConfig& c) { return json((c.*outer).*inner); }};
}

template <class Mid, class T>
Key snake_key(Mid SnakeConfig::*mid, T Mid::*inner) {
  return {[mid, inner](const json& v, RunConfig& c) { (c.snake.*mid).*inner = v.get<T>(); },
          [mid, inner](const RunConfig& c) { return json((c.snake.*mid).*inner); }};
}

template <class Mid, class T>
Key lidar_key(Mid LidarParams::*mid, T Mid::*inner) {
  return {[mid, inner](const json& v, RunConfig& c) { (c.lidar.*mid).*inner = v.get<T>(); },
          [mid, inner](const RunConfig& c) { return json((c.lidar.*mid).*inner); }};
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    k["alpha"] = snake_key(&SnakeConfig::snake, &SnakeParams::alpha);
    k["beta"] = snake_key(&SnakeConfig::snake, &SnakeParams::beta);
    k["gamma"] = snake_key(&SnakeConfig::snake, &SnakeParams::gamma);
    k["max_iters"] = snake_key(&SnakeConfig::snake, &SnakeParams::max_iters);
    k["epsilon"] = snake_key(&SnakeConfig::snake, &SnakeParams::epsilon);
    k["resample_every"] = snake_key(&SnakeConfig::snake, &SnakeParams::resample_every);
    k["mode"] = {[](const json& v, RunConfig& c) { c.snake.snake.mode = parse_snake_mode(v.get<std::string>()); },
                 [](const RunConfig& c) { return json(to_string(c.snake.snake.mode)); }};
    k["w_line"] = snake_key(&SnakeConfig::energy, &ImageEnergyParams::w_line);
    k["w_edge"] = snake_key(&SnakeConfig::energy, &ImageEnergyParams::w_edge);
    k["w_term"] = snake_key(&SnakeConfig::energy, &ImageEnergyParams::w_term);
    k["sigma"] = snake_key(&SnakeConfig::energy, &ImageEnergyParams::sigma);
    k["mu"] = snake_key(&SnakeConfig::gvf, &GvfParams::mu);
    k["gvf_iters"] = snake_key(&SnakeConfig::gvf, &GvfParams::iters);
    k["delta"] = snake_key(&SnakeConfig::shape, &ShapeSimParams::delta);
    k["shape_weight"] = snake_key(&SnakeConfig::shape, &ShapeSimParams::weight);
    k["opening_radius"] = lidar_key(&LidarParams::segments, &SegmentParams::opening_radius);
    k["connectivity"] = lidar_key(&LidarParams::segments, &SegmentParams::connectivity);
    k["min_segment_area_m2"] = lidar_key(&LidarParams::segments, &SegmentParams::min_area_m2);
    k["fill_min_neighbors"] = lidar_key(&LidarParams::segments, &SegmentParams::fill_min_neighbors);
    k["ground_class"] = lidar_key(&LidarParams::ground, &GroundParams::ground_class);
    k["ground_min_offset"] = lidar_key(&LidarParams::ground, &GroundParams::min_offset);
    k["lidar_density"] = {[](const json& v, RunConfig& c) { c.lidar.density = v.get<double>(); },
                          [](const RunConfig& c) { return json(c.lidar.density); }};
    k["polygon_tolerance"] = nested(&RunConfig::polygonize, &PolygonizeParams::tolerance);
    k["orientation_source"] = {
        [](const json& v, RunConfig& c) { c.polygonize.orientation = parse_orientation_source(v.get<std::string>()); },
        [](const RunConfig& c) { return json(to_string(c.polygonize.orientation)); }};
    k["pixel_size"] = field(&RunConfig::pixel_size);
    k["eval_cell_size"] = field(&RunConfig::eval_cell_size);
    k["workers"] = field(&RunConfig::workers);
    k["svg"] = field(&RunConfig::svg);
    k["debug_dir"] = field(&RunConfig::debug_dir);
    return k;
  }();
  return table;
}

}  // namespace

RunConfig run_config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) fail(ErrorKind::Parse, "config: top level must be a JSON object");
  RunConfig c = std::move(base);
  for (const auto& [name, value] : j.items()) {
    if (name == "paths") {
      if (!value.is_object()) fail(ErrorKind::Parse, "config: 'paths' must be an object");
      for (const auto& [p, v] : value.items()) {
        std::string* slot = p == "image"       ? &c.paths.image
                            : p == "cloud"     ? &c.paths.cloud
                            : p == "transform" ? &c.paths.transform
                            : p == "truth"     ? &c.paths.truth
                            : p == "outdir"    ? &c.paths.outdir
                                               : nullptr;
        if (!slot) fail(ErrorKind::Parse, "config: unknown path key '" + p + "'");
        if (!v.is_string()) fail(ErrorKind::Parse, "config: path '" + p + "' must be a string");
        *slot = v.get<std::string>();
      }
      continue;
    }
    const auto it = keys().find(name);
    if (it == keys().end()) fail(ErrorKind::Parse, "config: unknown key '" + name + "'");
    try {
      it->second.read(value, c);
    } catch (const json::exception& e) {
      fail(ErrorKind::Parse, "config: key '" + name + "': " + e.what());
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& [name, key] : keys()) j[name] = key.write(c);
  j["paths"] = {{"image", c.paths.image},
                {"cloud", c.paths.cloud},
                {"transform", c.paths.transform},
                {"truth", c.paths.truth},
                {"outdir", c.paths.outdir}};
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, "config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void validate(const RunConfig& c) {
  validate(c.snake);
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::InvalidArgument, "config: " + what);
  };
  const auto& s = c.lidar.segments;
  require(s.opening_radius >= 1, "opening_radius must be >= 1");
  require(s.connectivity == 4 || s.connectivity == 8, "connectivity must be 4 or 8");
  require(s.min_area_m2 >= 0, "min_segment_area_m2 must be >= 0");
  require(s.fill_min_neighbors >= 0 && s.fill_min_neighbors <= 8, "fill_min_neighbors must be in [0, 8]");
  require(c.lidar.ground.min_offset >= 0, "ground_min_offset must be >= 0");
  require(std::isfinite(c.lidar.density) && c.lidar.density >= 0, "lidar_density must be >= 0 (0 = estimate)");
  require(c.polygonize.tolerance >= 0 && c.polygonize.tolerance <= 1, "polygon_tolerance must be in [0, 1]");
  require(c.pixel_size > 0 && std::isfinite(c.pixel_size), "pixel_size must be > 0");
  require(c.eval_cell_size >= 0, "eval_cell_size must be >= 0 (0 = pixel_size)");
  require(c.workers >= 0, "workers must be >= 0");
}

}  // namespace bfe
