#include <doctest.h>

#include <cmath>

#include "bfe/error.hpp"
#include "bfe/metrics.hpp"
#include "bfe/synthetic.hpp"

using namespace bfe;

TEST_SUITE("synthetic") {

TEST_CASE("noise-free rectangle renders its rasterized footprint") {
  SceneSpec s;
  s.width = s.height = 200;
  s.noise_sigma = 0;
  s.background_gray = 50;
  s.buildings.push_back({ShapeKind::Rect, rect_footprint({15, 15}, 12, 7, 25), 200, 200, 8});
  const Scene sc = generate_scene(s);
  const BinaryGrid m = rasterize_polygon(s.buildings[0].footprint, {{0, 0}, s.resolution, 200, 200});
  long roof = 0;
  for (double v : sc.image.data) roof += v == 200;
  CHECK(roof == long(m.count()));
  for (std::size_t i = 0; i < m.cells.size(); ++i) CHECK((sc.image.data[i] == 200) == bool(m.cells[i]));
}

TEST_CASE("point density and per-building bookkeeping") {
  SceneSpec s;
  s.width = s.height = 600;  // 90 m
  s.buildings.push_back({ShapeKind::Rect, rect_footprint({45, 45}, 40, 40, 0), 200, 200, 8});
  const Scene sc = generate_scene(s);
  const double area = 90.0 * 90.0;
  CHECK(std::abs(double(sc.cloud.size()) - 2 * area) <= 0.05 * 2 * area);
  CHECK(std::abs(double(sc.points_per_building[0]) - 2 * 1600) <= 0.05 * 2 * 1600);
  std::size_t roof = 0;
  for (std::size_t i = 0; i < sc.cloud.size(); ++i) {
    const bool is_roof = sc.cloud.classes[i] == s.building_class;
    roof += is_roof;
    CHECK(is_roof == (sc.cloud.points[i].z >= 8));
    if (!is_roof) CHECK(sc.cloud.points[i].z <= s.terrain_noise);
  }
  CHECK(roof == sc.points_per_building[0]);
}

TEST_CASE("misalignment enters the transform") {
  SceneSpec s;
  s.misalignment = {1.41, 0};
  const Scene sc = generate_scene(s);
  CHECK(sc.transform.tx == doctest::Approx(1.41 / 0.15));
  CHECK(sc.transform.ty == 0);
  CHECK(sc.transform.a == doctest::Approx(1 / 0.15));
}

TEST_CASE("same seed, same scene") {
  const SceneSpec s = benchmark_scene(7);
  const Scene a = generate_scene(s), b = generate_scene(s);
  CHECK(a.image.data == b.image.data);
  CHECK(a.cloud.points == b.cloud.points);
  CHECK(a.cloud.classes == b.cloud.classes);
  SceneSpec other = s;
  other.seed = 8;
  CHECK(generate_scene(other).image.data != a.image.data);
}

TEST_CASE("benchmark scene") {
  const SceneSpec s = benchmark_scene();
  CHECK(s.width == 512);
  CHECK(s.height == 512);
  CHECK(s.resolution == 0.15);
  CHECK(s.lidar_density == 2);
  CHECK(s.noise_sigma == 5);
  CHECK(std::hypot(s.misalignment.x, s.misalignment.y) == doctest::Approx(0.5));
  REQUIRE(s.buildings.size() == 5);
  CHECK(s.buildings[0].shape == ShapeKind::Rect);
  CHECK(s.buildings[1].shape == ShapeKind::L);
  CHECK(s.buildings[2].shape == ShapeKind::U);
  CHECK(s.buildings[4].shape == ShapeKind::Gabled);
  // Truth round-trips through the metrics at 100%.
  const Scene sc = generate_scene(s);
  for (const auto& b : evaluate(sc.truth, sc.truth, s.resolution).per_building) CHECK(b.iou == 100);
}

TEST_CASE("json round trip and validation") {
  const SceneSpec s = benchmark_scene(3);
  const SceneSpec back = scene_spec_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));
  CHECK(generate_scene(back).image.data == generate_scene(s).image.data);

  SceneSpec bad = s;
  bad.lidar_density = 0;
  CHECK_THROWS_AS(generate_scene(bad), Error);
  bad = s;
  bad.buildings[0].footprint = translate(bad.buildings[0].footprint, {500, 0});
  CHECK_THROWS_AS(generate_scene(bad), Error);
  CHECK_THROWS_AS(scene_spec_from_json(nlohmann::json::parse(R"({"width": "wide"})")), Error);
  CHECK_THROWS_AS(parse_shape_kind("dome"), Error);
}

}  // TEST_SUITE
