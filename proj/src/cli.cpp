#include "bfe/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bfe/error.hpp"
#include "bfe/pnm.hpp"
#include "bfe/registration.hpp"
#include "bfe/synthetic.hpp"

namespace bfe {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Thrown for problems the user must fix on the command line or in the
// config; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what + " path");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " file not found: " + path);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string wkt_lines(const std::vector<Polygon>& polys) {
  std::string s;
  for (const auto& p : polys) s += to_wkt(p) + "\n";
  return s;
}

std::string points_attr(const std::vector<Point2>& pts) {
  std::string s;
  for (const auto& p : pts) s += (s.empty() ? "" : " ") + fmt(p.x) + "," + fmt(p.y);
  return s;
}

GrayImage scaled_to_byte(const Field& f) {
  double hi = 0.0;
  for (double v : f.data) hi = std::max(hi, std::abs(v));
  GrayImage g(f.width, f.height);
  for (std::size_t i = 0; i < f.data.size(); ++i) g.data[i] = hi > 0 ? 255.0 * std::abs(f.data[i]) / hi : 0.0;
  return g;
}

void write_debug(const fs::path& dir, const ExtractResult& r) {
  fs::create_directories(dir);
  const BinaryGrid& grid = r.lidar.grid;
  GrayImage occ(grid.grid.width, grid.grid.height);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) occ.data[i] = grid.cells[i] ? 255.0 : 0.0;
  write_file(dir / "lidar_grid.pgm", save_pgm(occ));
  const LabelGrid& lab = r.lidar.labels;
  GrayImage labels(lab.width, lab.height);
  for (std::size_t i = 0; i < lab.labels.size(); ++i) {
    labels.data[i] = lab.labels[i] ? 55.0 + (lab.labels[i] * 53) % 200 : 0.0;
  }
  write_file(dir / "lidar_labels.pgm", save_pgm(labels));
  if (r.field.x.width > 0) {
    Field mag(r.field.x.width, r.field.x.height);
    for (std::size_t i = 0; i < mag.data.size(); ++i) mag.data[i] = std::hypot(r.field.x.data[i], r.field.y.data[i]);
    write_file(dir / "force_magnitude.pgm", save_pgm(scaled_to_byte(mag)));
  }
  std::vector<Polygon> init, raw;
  for (const auto& b : r.buildings) {
    init.push_back(Polygon{b.init.pixels});
    raw.push_back(Polygon{b.snake.contour.points});
  }
  write_file(dir / "init_px.wkt", wkt_lines(init));
  write_file(dir / "snake_px.wkt", wkt_lines(raw));
}

json buildings_json(const ExtractResult& r) {
  json list = json::array();
  for (const auto& b : r.buildings) {
    list.push_back({{"id", b.id},
                    {"shape_level", to_string(b.polygon.shape_level)},
                    {"orientation_deg", b.polygon.orientation},
                    {"snake_iterations", b.snake.iterations},
                    {"snake_converged", b.snake.converged}});
  }
  return {{"buildings", list}, {"lidar_density", r.density}, {"threshold_m", r.lidar.split.threshold},
          {"warnings", r.warnings}};
}

// Collects --key overrides for every RunConfig key; values parse as JSON
// when possible (numbers, booleans) and are taken as strings otherwise.
struct Overrides {
  std::map<std::string, std::optional<std::string>> values;

  void add_to(CLI::App& cmd) {
    const json defaults = to_json(RunConfig{});
    for (const auto& [key, _] : defaults.items()) {
      if (key == "paths") continue;
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      cmd.add_option("--" + flag, values[key], "override config key " + key);
    }
  }

  json to_json_object() const {
    json j = json::object();
    for (const auto& [key, v] : values) {
      if (!v) continue;
      j[key] = json::parse(*v, nullptr, false);
      if (j[key].is_discarded() || j[key].is_object() || j[key].is_array()) j[key] = *v;
    }
    return j;
  }
};

int cmd_extract(const std::string& config_path, const Overrides& overrides, const RunPaths& flag_paths,
                std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      require_file(config_path, "config");
      cfg = load_run_config(config_path);
    }
    cfg = run_config_from_json(overrides.to_json_object(), cfg);
    auto set = [](std::string& slot, const std::string& v) {
      if (!v.empty()) slot = v;
    };
    set(cfg.paths.image, flag_paths.image);
    set(cfg.paths.cloud, flag_paths.cloud);
    set(cfg.paths.transform, flag_paths.transform);
    set(cfg.paths.truth, flag_paths.truth);
    set(cfg.paths.outdir, flag_paths.outdir);
    validate(cfg);
    require_file(cfg.paths.image, "image");
    require_file(cfg.paths.cloud, "cloud");
    require_file(cfg.paths.transform, "transform");
    if (!cfg.paths.truth.empty()) require_file(cfg.paths.truth, "truth");
    if (cfg.paths.outdir.empty()) throw UsageError("missing outdir path");
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const fs::path outdir = cfg.paths.outdir;
  fs::create_directories(outdir);
  write_file(outdir / "run.json", to_json(cfg).dump(2) + "\n");

  GrayImage image;
  PointCloud3D cloud;
  AffineTransform2D transform;
  std::vector<Polygon> truth;
  try {
    image = load_gray(cfg.paths.image);
    cloud = parse_xyz(read_file(cfg.paths.cloud));
    transform = parse_transform(read_file(cfg.paths.transform));
    if (!cfg.paths.truth.empty()) truth = parse_wkt_lines(read_file(cfg.paths.truth));
  } catch (const Error& e) {
    throw StageError("load", e);
  }

  const ExtractResult result = extract_footprints(image, cloud, transform, cfg);
  for (const auto& w : result.warnings) err << "bfe extract: warning: " << w << "\n";

  std::vector<Polygon> footprints;
  for (const auto& b : result.buildings) footprints.push_back(b.footprint);
  try {
    write_file(outdir / "footprints.wkt", wkt_lines(footprints));
    write_file(outdir / "buildings.json", buildings_json(result).dump(2) + "\n");
    if (cfg.svg) {
      write_file(outdir / "overlay.svg", svg_overlay(image.width, image.height, result, truth, cfg.pixel_size));
    }
    if (!cfg.debug_dir.empty()) write_debug(cfg.debug_dir, result);
    if (!cfg.paths.truth.empty()) {
      const double cell = cfg.eval_cell_size > 0 ? cfg.eval_cell_size : cfg.pixel_size;
      const EvaluationReport report = evaluate(footprints, truth, cell);
      write_file(outdir / "evaluation.json", to_json(report).dump(2) + "\n");
      out << "mean IoU " << fmt(report.aggregate.iou) << " % over " << report.per_building.size() << " buildings\n";
    }
  } catch (const Error& e) {
    throw StageError("write", e);
  }
  out << footprints.size() << " footprints written to " << (outdir / "footprints.wkt").string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& extracted_path, const std::string& truth_path, double cell_size,
                 const std::string& out_path, std::ostream& out) {
  require_file(extracted_path, "extracted");
  require_file(truth_path, "truth");
  if (!(cell_size > 0)) throw UsageError("cell size must be > 0");
  std::vector<Polygon> extracted, truth;
  try {
    extracted = parse_wkt_lines(read_file(extracted_path));
    truth = parse_wkt_lines(read_file(truth_path));
  } catch (const Error& e) {
    throw StageError("load", e);
  }
  EvaluationReport report;
  try {
    report = evaluate(extracted, truth, cell_size);
  } catch (const Error& e) {
    throw StageError("evaluate", e);
  }
  const std::string text = to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

int cmd_synth(const std::string& spec_path, const std::string& preset, std::optional<std::uint64_t> seed,
              const std::string& outdir, std::ostream& out) {
  SceneSpec spec;
  if (!spec_path.empty()) {
    require_file(spec_path, "spec");
    const json j = json::parse(read_file(spec_path), nullptr, false);
    if (j.is_discarded()) throw UsageError("spec " + spec_path + ": invalid JSON");
    try {
      spec = scene_spec_from_json(j);
    } catch (const Error& e) {
      throw UsageError("spec " + spec_path + ": " + e.what());
    }
  } else if (preset == "benchmark") {
    spec = benchmark_scene();
  } else {
    throw UsageError(preset.empty() ? "synth needs --spec or --preset" : "unknown preset '" + preset + "'");
  }
  if (seed) spec.seed = *seed;
  try {
    validate(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  Scene scene;
  try {
    scene = generate_scene(spec);
  } catch (const Error& e) {
    throw StageError("synth", e);
  }
  const fs::path dir = outdir;
  fs::create_directories(dir);
  write_file(dir / "image.pgm", save_pgm(scene.image));
  write_file(dir / "cloud.xyz", format_xyz(scene.cloud));
  write_file(dir / "transform.txt", format_transform(scene.transform) + "\n");
  write_file(dir / "truth.wkt", wkt_lines(scene.truth));
  write_file(dir / "scene.json", to_json(spec).dump(2) + "\n");
  out << "scene with " << scene.truth.size() << " buildings and " << scene.cloud.points.size()
      << " points written to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_fit_transform(const std::string& pairs_path, const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  require_file(pairs_path, "correspondences");
  AffineTransform2D t;
  std::vector<Correspondence> pairs;
  try {
    pairs = parse_correspondences(read_file(pairs_path));
    t = fit_least_squares(pairs);
  } catch (const Error& e) {
    throw StageError("fit", e);
  }
  double ss = 0.0;
  for (const auto& [src, dst] : pairs) {
    const Point2 d = apply(t, src) - dst;
    ss += dot(d, d);
  }
  err << "rms residual " << std::sqrt(ss / static_cast<double>(pairs.size())) << " over " << pairs.size()
      << " pairs\n";
  const std::string text = format_transform(t) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

}  // namespace

std::vector<Polygon> parse_wkt_lines(std::string_view text) {
  std::vector<Polygon> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_wkt(line));
  }
  return out;
}

json to_json(const EvaluationReport& report) {
  auto row = [](const BuildingScore& s) {
    return json{{"IoU", s.iou}, {"Cp", s.cp}, {"Cr", s.cr}, {"EDC", s.edc}, {"DARE", s.dare}};
  };
  json per = json::array();
  for (const auto& s : report.per_building) {
    json r = row(s);
    r["id"] = s.id;
    r["truth_id"] = s.truth_id;
    per.push_back(r);
  }
  return {{"per_building", per},
          {"aggregate", row(report.aggregate)},
          {"unmatched", {{"extracted", report.unmatched_extracted}, {"truth", report.unmatched_truth}}}};
}

std::string svg_overlay(int width, int height, const ExtractResult& result, const std::vector<Polygon>& truth_m,
                        double pixel_size) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& t : truth_m) {
    std::vector<Point2> px;
    for (const auto& v : t.vertices) px.push_back((1.0 / pixel_size) * v);
    s << "<polygon class=\"truth\" points=\"" << points_attr(px) << "\" fill=\"none\" stroke=\"#2a2\" stroke-width=\"1\"/>\n";
  }
  for (const auto& b : result.buildings) {
    s << "<g id=\"building-" << b.id << "\">\n";
    s << "<polygon class=\"init\" points=\"" << points_attr(b.init.pixels)
      << "\" fill=\"none\" stroke=\"#36c\" stroke-dasharray=\"4 3\"/>\n";
    s << "<polygon class=\"snake\" points=\"" << points_attr(b.snake.contour.points)
      << "\" fill=\"none\" stroke=\"#e80\"/>\n";
    s << "<polygon class=\"footprint\" points=\"" << points_attr(b.polygon.polygon.vertices)
      << "\" fill=\"none\" stroke=\"#d22\" stroke-width=\"1.5\"/>\n";
    s << "</g>\n";
  }
  s << "</svg>\n";
  return s.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Building footprint extraction from an orthophoto and a LiDAR point cloud", "bfe"};
  app.require_subcommand(1);

  std::string config_path;
  RunPaths paths;
  Overrides overrides;
  auto* extract = app.add_subcommand("extract", "LiDAR boundaries -> snakes -> rectilinear footprints");
  extract->add_option("--config", config_path, "JSON config (e.g. a previous run.json)");
  extract->add_option("--image", paths.image, "orthophoto (PGM/PPM)");
  extract->add_option("--cloud", paths.cloud, "point cloud, 'x y z [class]' per line");
  extract->add_option("--transform", paths.transform, "affine transform file, cloud meters -> image pixels");
  extract->add_option("--truth", paths.truth, "optional truth WKT (meters) for evaluation");
  extract->add_option("--outdir", paths.outdir, "output directory");
  overrides.add_to(*extract);

  std::string extracted_path, truth_path, eval_out;
  double cell_size = 0.15;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "pixel-based comparison of two WKT files");
  evaluate_cmd->add_option("--extracted", extracted_path)->required();
  evaluate_cmd->add_option("--truth", truth_path)->required();
  evaluate_cmd->add_option("--cell-size", cell_size, "evaluation cell size in meters");
  evaluate_cmd->add_option("--out", eval_out, "report path (default: stdout)");

  std::string spec_path, preset, synth_out;
  std::optional<std::uint64_t> seed;
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  synth->add_option("--spec", spec_path, "SceneSpec JSON");
  synth->add_option("--preset", preset, "built-in scene: benchmark");
  synth->add_option("--seed", seed);
  synth->add_option("--outdir", synth_out)->required();

  std::string pairs_path, transform_out;
  auto* fit = app.add_subcommand("fit-transform", "least-squares affine fit from point correspondences");
  fit->add_option("--correspondences", pairs_path, "'sx sy tx ty' per line")->required();
  fit->add_option("--out", transform_out, "transform path (default: stdout)");

  std::vector<std::string> argv_strings(args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_strings) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bfe: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "extract") return cmd_extract(config_path, overrides, paths, out, err);
    if (name == "evaluate") return cmd_evaluate(extracted_path, truth_path, cell_size, eval_out, out);
    if (name == "synth") return cmd_synth(spec_path, preset, seed, synth_out, out);
    return cmd_fit_transform(pairs_path, transform_out, out, err);
  } catch (const UsageError& e) {
    err << "bfe " << name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const StageError& e) {
    err << "bfe " << name << ": error " << e.what() << "\n";
    return kExitPipeline;
  } catch (const Error& e) {
    err << "bfe " << name << ": error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    err << "bfe " << name << ": error: " << e.what() << "\n";
    return kExitPipeline;
  }
}

}  // namespace bfe
