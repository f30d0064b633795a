#include "bfe/snake.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfe/error.hpp"
#include "bfe/simd/kernels.hpp"

namespace bfe {

const char* to_string(SnakeMode mode) {
  switch (mode) {
    case SnakeMode::Basic: return "basic";
    case SnakeMode::Gvf: return "gvf";
    case SnakeMode::Proposed: return "proposed";
  }
  return "proposed";
}

SnakeMode parse_snake_mode(const std::string& text) {
  if (text == "basic") return SnakeMode::Basic;
  if (text == "gvf") return SnakeMode::Gvf;
  if (text == "proposed") return SnakeMode::Proposed;
  fail(ErrorKind::InvalidArgument, "unknown snake mode '" + text + "' (expected basic|gvf|proposed)");
}

void validate(const SnakeConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::InvalidArgument, std::string("snake config: ") + what);
  };
  require(c.snake.alpha >= 0 && std::isfinite(c.snake.alpha), "alpha must be >= 0");
  require(c.snake.beta >= 0 && std::isfinite(c.snake.beta), "beta must be >= 0");
  require(c.snake.gamma > 0 && std::isfinite(c.snake.gamma), "gamma must be > 0");
  require(c.snake.epsilon > 0, "epsilon must be > 0");
  require(c.snake.max_iters >= 0, "max_iters must be >= 0");
  require(c.snake.resample_every >= 0, "resample_every must be >= 0");
  require(c.energy.sigma >= 0, "sigma must be >= 0");
  require(c.energy.kappa > 0, "kappa must be > 0");
  require(c.gvf.mu > 0, "mu must be > 0");
  require(c.gvf.iters >= 0, "gvf_iters must be >= 0");
  require(c.shape.delta > 0, "delta must be > 0");
  require(c.shape.weight >= 0, "shape_weight must be >= 0");
}

// ---------------------------------------------------------------------------
// Image energy

EnergyTerms image_energy_terms(const GrayImage& gray, const ImageEnergyParams& p) {
  const GrayImage c = gaussian_smooth(gray, p.sigma);
  const Gradient g = gradient(c);
  const int w = c.width;
  const int h = c.height;
  EnergyTerms t{c, Field(w, h), Field(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double cx = g.gx.at(x, y);
      const double cy = g.gy.at(x, y);
      const double cxx = c.clamped(x + 1, y) - 2.0 * c.at(x, y) + c.clamped(x - 1, y);
      const double cyy = c.clamped(x, y + 1) - 2.0 * c.at(x, y) + c.clamped(x, y - 1);
      const double cxy = 0.25 * (c.clamped(x + 1, y + 1) - c.clamped(x - 1, y + 1) - c.clamped(x + 1, y - 1) +
                                 c.clamped(x - 1, y - 1));
      const double mag2 = cx * cx + cy * cy;
      t.edge.at(x, y) = -mag2;
      t.term.at(x, y) = (cyy * cx * cx - 2.0 * cxy * cx * cy + cxx * cy * cy) / (std::pow(mag2, 1.5) + p.kappa);
    }
  }
  return t;
}

Field normalize_min_max(const Field& f) {
  Field out(f.width, f.height);
  if (f.data.empty()) return out;
  const auto [lo, hi] = std::minmax_element(f.data.begin(), f.data.end());
  const double range = *hi - *lo;
  if (!(range > 0)) return out;
  for (std::size_t i = 0; i < f.data.size(); ++i) out.data[i] = (f.data[i] - *lo) / range;
  return out;
}

Field image_energy(const GrayImage& gray, const ImageEnergyParams& p) {
  const EnergyTerms t = image_energy_terms(gray, p);
  const Field line = normalize_min_max(t.line);
  const Field edge = normalize_min_max(t.edge);
  const Field term = normalize_min_max(t.term);
  Field e(gray.width, gray.height);
  for (std::size_t i = 0; i < e.data.size(); ++i) {
    e.data[i] = p.w_line * line.data[i] + p.w_edge * edge.data[i] + p.w_term * term.data[i];
  }
  return e;
}

// ---------------------------------------------------------------------------
// Gradient vector flow

namespace {

// Field with one ghost cell on every side, refreshed by edge replication.
struct Padded {
  int w, h;
  std::vector<double> data;

  Padded(const Field& f) : w(f.width), h(f.height), data(static_cast<std::size_t>(w + 2) * (h + 2)) {
    for (int y = 0; y < h; ++y) std::copy_n(f.row(y), w, row(y));
    refresh_ghosts();
  }
  double* row(int y) { return data.data() + static_cast<std::size_t>(y + 1) * (w + 2) + 1; }
  const double* row(int y) const { return data.data() + static_cast<std::size_t>(y + 1) * (w + 2) + 1; }
  void refresh_ghosts() {
    for (int y = 0; y < h; ++y) {
      row(y)[-1] = row(y)[0];
      row(y)[w] = row(y)[w - 1];
    }
    std::copy_n(row(0) - 1, w + 2, row(-1) - 1);
    std::copy_n(row(h - 1) - 1, w + 2, row(h) - 1);
  }
  Field unpad() const {
    Field f(w, h);
    for (int y = 0; y < h; ++y) std::copy_n(row(y), w, f.row(y));
    return f;
  }
};

struct SourceTerms {
  Field fx, fy, mag2;
  double max_grad = 0.0;
  double max_mag2 = 0.0;
};

SourceTerms gvf_sources(const Field& energy) {
  Field f(energy.width, energy.height);
  for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] = -energy.data[i];
  Gradient g = gradient(f);
  SourceTerms s{std::move(g.gx), std::move(g.gy), Field(energy.width, energy.height)};
  for (std::size_t i = 0; i < s.mag2.data.size(); ++i) {
    const double m = s.fx.data[i] * s.fx.data[i] + s.fy.data[i] * s.fy.data[i];
    s.mag2.data[i] = m;
    s.max_mag2 = std::max(s.max_mag2, m);
  }
  s.max_grad = std::sqrt(s.max_mag2);
  return s;
}

}  // namespace

GvfField compute_gvf(const Field& energy, double mu, int iters) {
  if (!(mu > 0)) fail(ErrorKind::InvalidArgument, "compute_gvf: mu must be positive");
  if (iters < 0) fail(ErrorKind::InvalidArgument, "compute_gvf: iters must be >= 0");
  const SourceTerms src = gvf_sources(energy);
  const int w = energy.width;
  const int h = energy.height;

  GvfField out;
  out.mu = mu;
  // 0.25/mu is the diffusion limit on a unit grid; the reaction term needs
  // dt * (8 mu + max|grad f|^2) < 2 as well.
  out.time_step = std::min(0.25 / mu, 1.9 / (8.0 * mu + src.max_mag2));

  Padded u(src.fx), v(src.fy);
  Padded un(src.fx), vn(src.fy);
  const double tol = 1e-4 * src.max_grad;
  const auto& k = simd::kernels();
  out.residual = std::numeric_limits<double>::infinity();
  if (src.max_grad == 0.0) out.residual = 0.0;

  int it = 0;
  while (it < iters && out.residual >= tol && src.max_grad > 0.0) {
    double worst = 0.0;
    for (int y = 0; y < h; ++y) {
      const simd::GvfRow row{u.row(y - 1), u.row(y), u.row(y + 1), v.row(y - 1), v.row(y), v.row(y + 1),
                             src.fx.row(y), src.fy.row(y), src.mag2.row(y), un.row(y), vn.row(y),
                             static_cast<std::size_t>(w), mu, out.time_step};
      worst = std::max(worst, k.gvf_row_update(row));
    }
    std::swap(u.data, un.data);
    std::swap(v.data, vn.data);
    u.refresh_ghosts();
    v.refresh_ghosts();
    out.residual = worst;
    ++it;
  }
  out.iters = it;
  out.u = u.unpad();
  out.v = v.unpad();
  return out;
}

double gvf_euler_residual(const GvfField& gvf, const Field& energy) {
  const SourceTerms src = gvf_sources(energy);
  if (!gvf.u.same_shape(energy) || !gvf.v.same_shape(energy)) {
    fail(ErrorKind::InvalidArgument, "gvf_euler_residual: field size mismatch");
  }
  double worst = 0.0;
  for (int y = 1; y + 1 < energy.height; ++y) {
    for (int x = 1; x + 1 < energy.width; ++x) {
      auto lap = [&](const Field& f) {
        return f.at(x - 1, y) + f.at(x + 1, y) + f.at(x, y - 1) + f.at(x, y + 1) - 4.0 * f.at(x, y);
      };
      const double m = src.mag2.at(x, y);
      const double ru = gvf.mu * lap(gvf.u) - (gvf.u.at(x, y) - src.fx.at(x, y)) * m;
      const double rv = gvf.mu * lap(gvf.v) - (gvf.v.at(x, y) - src.fy.at(x, y)) * m;
      worst = std::max({worst, std::abs(ru), std::abs(rv)});
    }
  }
  return worst;
}

VectorField potential_force(const Field& energy) {
  Gradient g = gradient(energy);
  for (auto& v : g.gx.data) v = -v;
  for (auto& v : g.gy.data) v = -v;
  return {std::move(g.gx), std::move(g.gy)};
}

VectorField as_vector_field(const GvfField& gvf) { return {gvf.u, gvf.v}; }

Point2 sample(const VectorField& field, Point2 p) {
  const int w = field.x.width;
  const int h = field.x.height;
  const double fx = p.x - 0.5;
  const double fy = p.y - 0.5;
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= w - 1 && fy <= h - 1)) return {0.0, 0.0};
  const int x0 = std::min(static_cast<int>(fx), std::max(w - 2, 0));
  const int y0 = std::min(static_cast<int>(fy), std::max(h - 2, 0));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double tx = fx - x0;
  const double ty = fy - y0;
  auto lerp2 = [&](const Field& f) {
    const double top = (1.0 - tx) * f.at(x0, y0) + tx * f.at(x1, y0);
    const double bottom = (1.0 - tx) * f.at(x0, y1) + tx * f.at(x1, y1);
    return (1.0 - ty) * top + ty * bottom;
  };
  return {lerp2(field.x), lerp2(field.y)};
}

// ---------------------------------------------------------------------------
// Shape similarity

double shape_sim_energy(std::span<const Point2> snake, std::span<const Point2> reference, double delta) {
  if (snake.empty() || reference.empty()) fail(ErrorKind::InvalidArgument, "shape_sim_energy: empty point set");
  if (!(delta > 0)) fail(ErrorKind::InvalidArgument, "shape_sim_energy: delta must be positive");
  const double d = hausdorff_distance(snake, reference);
  return 1.0 - std::exp(-(d * d) / delta);
}

namespace {

// Hausdorff bookkeeping that re-evaluates d_H^2 with one snake point moved
// in O(|reference|): per snake point the nearest-reference distance with the
// two largest kept; per reference point the nearest and second-nearest
// snake distances.
class HausdorffProbe {
 public:
  HausdorffProbe(std::span<const Point2> snake, std::span<const Point2> ref)
      : snake_(snake), rx_(ref.size()), ry_(ref.size()) {
    for (std::size_t j = 0; j < ref.size(); ++j) {
      rx_[j] = ref[j].x;
      ry_[j] = ref[j].y;
    }
    const auto& k = simd::kernels();
    double top1 = -1.0, top2 = -1.0;
    for (std::size_t i = 0; i < snake.size(); ++i) {
      const double d = k.min_sq_distance(snake[i].x, snake[i].y, rx_.data(), ry_.data(), rx_.size());
      if (d > top1) {
        top2 = top1;
        top1 = d;
        top_index_ = i;
      } else if (d > top2) {
        top2 = d;
      }
    }
    top1_ = top1;
    top2_ = std::max(top2, 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    near1_.assign(ref.size(), inf);
    near2_.assign(ref.size(), inf);
    near_index_.assign(ref.size(), 0);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      for (std::size_t i = 0; i < snake.size(); ++i) {
        const double dx = rx_[j] - snake[i].x;
        const double dy = ry_[j] - snake[i].y;
        const double d = dx * dx + dy * dy;
        if (d < near1_[j]) {
          near2_[j] = near1_[j];
          near1_[j] = d;
          near_index_[j] = i;
        } else if (d < near2_[j]) {
          near2_[j] = d;
        }
      }
    }
  }

  /// Squared Hausdorff distance with snake point i replaced by p.
  double moved(std::size_t i, Point2 p) const {
    const auto& k = simd::kernels();
    const double own = k.min_sq_distance(p.x, p.y, rx_.data(), ry_.data(), rx_.size());
    double worst = std::max(own, i == top_index_ ? top2_ : top1_);
    for (std::size_t j = 0; j < rx_.size(); ++j) {
      const double dx = rx_[j] - p.x;
      const double dy = ry_[j] - p.y;
      const double base = near_index_[j] == i ? near2_[j] : near1_[j];
      worst = std::max(worst, std::min(base, dx * dx + dy * dy));
    }
    return worst;
  }

 private:
  std::span<const Point2> snake_;
  std::vector<double> rx_, ry_;
  double top1_ = 0.0, top2_ = 0.0;
  std::size_t top_index_ = 0;
  std::vector<double> near1_, near2_;
  std::vector<std::size_t> near_index_;
};

}  // namespace

std::vector<Point2> shape_force(std::span<const Point2> snake, std::span<const Point2> reference,
                                const ShapeSimParams& p, double h) {
  if (snake.empty() || reference.empty()) fail(ErrorKind::InvalidArgument, "shape_force: empty point set");
  if (!(p.delta > 0)) fail(ErrorKind::InvalidArgument, "shape_force: delta must be positive");
  if (!(h > 0)) fail(ErrorKind::InvalidArgument, "shape_force: step must be positive");
  const HausdorffProbe probe(snake, reference);
  auto energy = [&](double d2) { return 1.0 - std::exp(-d2 / p.delta); };
  std::vector<Point2> out(snake.size());
  for (std::size_t i = 0; i < snake.size(); ++i) {
    const Point2 s = snake[i];
    const double ex = energy(probe.moved(i, {s.x + h, s.y})) - energy(probe.moved(i, {s.x - h, s.y}));
    const double ey = energy(probe.moved(i, {s.x, s.y + h})) - energy(probe.moved(i, {s.x, s.y - h}));
    out[i] = {-p.weight * ex / (2.0 * h), -p.weight * ey / (2.0 * h)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evolution

CyclicPentadiagonal internal_system(std::size_t n, const SnakeParams& p) {
  // -(alpha D2 - beta D4) with D2 = [1 -2 1] and D4 = [1 -4 6 -4 1].
  const double a = 2.0 * p.alpha + 6.0 * p.beta;
  const double b = -p.alpha - 4.0 * p.beta;
  const double c = p.beta;
  return CyclicPentadiagonal(n, p.gamma + a, b, c);
}

namespace {

Point2 clamp_to(const VectorField& field, Point2 p) {
  const double xmax = field.x.width - 0.5;
  const double ymax = field.x.height - 0.5;
  return {std::clamp(p.x, 0.5, std::max(0.5, xmax)), std::clamp(p.y, 0.5, std::max(0.5, ymax))};
}

}  // namespace

SnakeContour evolve_step(const SnakeContour& snake, const VectorField& field, std::span<const Point2> extra_force,
                         const SnakeParams& params, const CyclicPentadiagonal& system) {
  const std::size_t n = snake.points.size();
  if (system.size() != n) fail(ErrorKind::InvalidArgument, "evolve_step: system size does not match snake");
  if (!extra_force.empty() && extra_force.size() != n) {
    fail(ErrorKind::InvalidArgument, "evolve_step: force count does not match snake");
  }
  std::vector<double> rx(n), ry(n), x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point2 f = sample(field, snake.points[i]);
    if (!extra_force.empty()) f = f + extra_force[i];
    rx[i] = params.gamma * snake.points[i].x + f.x;
    ry[i] = params.gamma * snake.points[i].y + f.y;
  }
  system.solve(rx, x);
  system.solve(ry, y);
  SnakeContour out;
  out.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.points[i] = clamp_to(field, {x[i], y[i]});
  return out;
}

SnakeContour evolve_step(const SnakeContour& snake, const VectorField& field, std::span<const Point2> extra_force,
                         const SnakeParams& params) {
  return evolve_step(snake, field, extra_force, params, internal_system(snake.points.size(), params));
}

VectorField external_field(const GrayImage& gray, const SnakeConfig& config) {
  const Field energy = image_energy(gray, config.energy);
  if (config.snake.mode == SnakeMode::Basic) return potential_force(energy);
  return as_vector_field(compute_gvf(energy, config.gvf.mu, config.gvf.iters));
}

std::size_t snake_point_count(std::span<const Point2> boundary) {
  const double perimeter = polygon_perimeter(Polygon{{boundary.begin(), boundary.end()}});
  return std::max<std::size_t>(32, static_cast<std::size_t>(std::lround(perimeter / 2.0)));
}

std::vector<Point2> shape_reference(std::span<const Point2> boundary) {
  const double perimeter = polygon_perimeter(Polygon{{boundary.begin(), boundary.end()}});
  const auto count = std::max<std::size_t>(boundary.size(), static_cast<std::size_t>(std::ceil(perimeter)));
  return resample_closed(boundary, count);
}

SnakeRun run_snake(const ProjectedBoundary& init, const VectorField& field, int width, int height,
                   const SnakeConfig& config) {
  validate(config);
  if (init.pixels.size() < 3) fail(ErrorKind::DegenerateInput, "run_snake: initial boundary needs >= 3 points");
  if (field.x.width != width || field.x.height != height || !field.x.same_shape(field.y)) {
    fail(ErrorKind::InvalidArgument, "run_snake: external field does not match image size");
  }
  const SnakeParams& sp = config.snake;
  const std::size_t n = snake_point_count(init.pixels);
  const std::vector<Point2> reference = shape_reference(init.pixels);
  const bool use_shape = sp.mode == SnakeMode::Proposed && config.shape.weight > 0;

  SnakeRun run;
  run.contour.points = resample_closed(init.pixels, n);
  for (auto& p : run.contour.points) p = clamp_to(field, p);

  const CyclicPentadiagonal system = internal_system(n, sp);
  std::vector<Point2> shape;
  for (int it = 1; it <= sp.max_iters; ++it) {
    if (use_shape) shape = shape_force(run.contour.points, reference, config.shape);
    SnakeContour next = evolve_step(run.contour, field, shape, sp, system);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, distance(next.points[i], run.contour.points[i]));
    run.contour = std::move(next);
    run.iterations = it;
    run.last_displacement = moved;
    if (sp.resample_every > 0 && it % sp.resample_every == 0) {
      run.contour.points = resample_closed(run.contour.points, n);
    }
    if (moved < sp.epsilon) {
      run.converged = true;
      break;
    }
  }
  return run;
}

SnakeRun run_snake(const ProjectedBoundary& init, const GrayImage& gray, const SnakeConfig& config) {
  return run_snake(init, external_field(gray, config), gray.width, gray.height, config);
}

}  // namespace bfe
