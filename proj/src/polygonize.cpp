#include "bfe/polygonize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "bfe/error.hpp"

namespace bfe {
namespace {

// Corners in walk order (counter-clockwise with y up): BL, BR, TR, TL.
// Sides: 0 bottom (BL-BR), 1 right, 2 top, 3 left.
struct CornerNotch {
  int corner;
  double nx, ny;  // inner notch corner
};

struct EdgeNotch {
  int side;
  double a, b;   // extent along the side, a < b
  double depth;  // coordinate of the inner edge
};

struct Candidate {
  std::vector<CornerNotch> corners;
  std::optional<EdgeNotch> edge;
  Polygon polygon;
  long symdiff = 0;
};

struct Frame {
  std::vector<Point2> pts;      // snake in the MBR frame
  std::vector<bool> vertical;   // local tangent closer to the y axis
  GridSpec grid;
  BinaryGrid region;
  double L, R, B, T;  // snapped box
  int i0, i1, j0, j1;  // box cells (inclusive)
};

struct Builder {
  const Frame& f;
  const PolygonizeParams& p;

  // Snap a vertical line near x0 spanning [ylo, yhi] to its supporting points.
  double snap_x(double x0, double ylo, double yhi) const {
    std::vector<double> xs;
    for (std::size_t k = 0; k < f.pts.size(); ++k) {
      const Point2 q = f.pts[k];
      if (f.vertical[k] && std::abs(q.x - x0) <= p.support_band && q.y >= ylo && q.y <= yhi) xs.push_back(q.x);
    }
    return xs.size() >= 3 ? trimmed_mean(std::move(xs), p.trim) : x0;
  }

  double snap_y(double y0, double xlo, double xhi) const {
    std::vector<double> ys;
    for (std::size_t k = 0; k < f.pts.size(); ++k) {
      const Point2 q = f.pts[k];
      if (!f.vertical[k] && std::abs(q.y - y0) <= p.support_band && q.x >= xlo && q.x <= xhi) ys.push_back(q.y);
    }
    return ys.size() >= 3 ? trimmed_mean(std::move(ys), p.trim) : y0;
  }

  bool deficit(int i, int j) const { return !f.region.at(i, j); }

  std::optional<CornerNotch> corner_notch(int corner) const {
    const bool sx = corner == 1 || corner == 2;  // anchored at the right side
    const bool sy = corner >= 2;                 // anchored at the top
    const int ncols = f.i1 - f.i0 + 1;
    const int nrows = f.j1 - f.j0 + 1;
    int best_w = 0, best_h = 0;
    long best_area = 0;
    int min_h = nrows;
    for (int k = 0; k < ncols; ++k) {
      const int i = sx ? f.i1 - k : f.i0 + k;
      int h = 0;
      while (h < nrows && deficit(i, sy ? f.j1 - h : f.j0 + h)) ++h;
      min_h = std::min(min_h, h);
      if (min_h == 0) break;
      const long area = static_cast<long>(k + 1) * min_h;
      if (area > best_area && k + 1 < ncols && min_h < nrows) {
        best_area = area;
        best_w = k + 1;
        best_h = min_h;
      }
    }
    if (best_w < p.min_notch || best_h < p.min_notch) return std::nullopt;
    const double ox = f.grid.origin.x, oy = f.grid.origin.y;
    const double cx = sx ? f.R : f.L;
    const double cy = sy ? f.T : f.B;
    double nx = sx ? ox + f.i1 - best_w + 1 : ox + f.i0 + best_w;
    double ny = sy ? oy + f.j1 - best_h + 1 : oy + f.j0 + best_h;
    const double snapped_x = snap_x(nx, std::min(cy, ny), std::max(cy, ny));
    const double snapped_y = snap_y(ny, std::min(cx, nx), std::max(cx, nx));
    return CornerNotch{corner, snapped_x, snapped_y};
  }

  std::optional<EdgeNotch> edge_notch(int side) const {
    const bool horizontal = side == 0 || side == 2;
    const int n_along = horizontal ? f.i1 - f.i0 + 1 : f.j1 - f.j0 + 1;
    const int n_depth = horizontal ? f.j1 - f.j0 + 1 : f.i1 - f.i0 + 1;
    auto cell_deficit = [&](int u, int v) {
      if (side == 0) return deficit(f.i0 + u, f.j0 + v);
      if (side == 2) return deficit(f.i0 + u, f.j1 - v);
      if (side == 3) return deficit(f.i0 + v, f.j0 + u);
      return deficit(f.i1 - v, f.j0 + u);
    };
    // Depth histogram over interior positions; the notch must leave both
    // end positions untouched so that it opens on this side only.
    std::vector<int> h(static_cast<std::size_t>(n_along), 0);
    for (int u = 1; u + 1 < n_along; ++u) {
      int d = 0;
      while (d < n_depth && cell_deficit(u, d)) ++d;
      h[static_cast<std::size_t>(u)] = d < n_depth ? d : 0;
    }
    // Largest rectangle under the histogram.
    long best_area = 0;
    int best_a = 0, best_b = -1, best_d = 0;
    std::vector<int> stack;
    for (int u = 0; u <= n_along; ++u) {
      const int cur = u < n_along ? h[static_cast<std::size_t>(u)] : 0;
      while (!stack.empty() && h[static_cast<std::size_t>(stack.back())] >= cur) {
        const int height = h[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        const int left = stack.empty() ? 0 : stack.back() + 1;
        const long area = static_cast<long>(u - left) * height;
        if (area > best_area) {
          best_area = area;
          best_a = left;
          best_b = u - 1;
          best_d = height;
        }
      }
      stack.push_back(u);
    }
    if (best_b - best_a + 1 < p.min_notch || best_d < p.min_notch) return std::nullopt;
    const double ox = f.grid.origin.x, oy = f.grid.origin.y;
    EdgeNotch e{side, 0, 0, 0};
    if (horizontal) {
      const double a = ox + f.i0 + best_a, b = ox + f.i0 + best_b + 1;
      const double d = side == 0 ? oy + f.j0 + best_d : oy + f.j1 - best_d + 1;
      const double edge_y = side == 0 ? f.B : f.T;
      const double lo = std::min(edge_y, d), hi = std::max(edge_y, d);
      e.a = snap_x(a, lo, hi);
      e.b = snap_x(b, lo, hi);
      e.depth = snap_y(d, a, b);
    } else {
      const double a = oy + f.j0 + best_a, b = oy + f.j0 + best_b + 1;
      const double d = side == 3 ? ox + f.i0 + best_d : ox + f.i1 - best_d + 1;
      const double edge_x = side == 3 ? f.L : f.R;
      const double lo = std::min(edge_x, d), hi = std::max(edge_x, d);
      e.a = snap_y(a, lo, hi);
      e.b = snap_y(b, lo, hi);
      e.depth = snap_x(d, a, b);
    }
    if (!(e.a < e.b)) return std::nullopt;
    return e;
  }

  Polygon outline(const std::vector<CornerNotch>& notches, const std::optional<EdgeNotch>& edge) const {
    const std::array<Point2, 4> box{{{f.L, f.B}, {f.R, f.B}, {f.R, f.T}, {f.L, f.T}}};
    Polygon out;
    auto& v = out.vertices;
    for (int c = 0; c < 4; ++c) {
      const auto it = std::find_if(notches.begin(), notches.end(), [c](const CornerNotch& n) { return n.corner == c; });
      const Point2 k = box[static_cast<std::size_t>(c)];
      if (it == notches.end()) {
        v.push_back(k);
      } else if (c % 2 == 0) {  // arriving along a vertical side
        v.push_back({k.x, it->ny});
        v.push_back({it->nx, it->ny});
        v.push_back({it->nx, k.y});
      } else {
        v.push_back({it->nx, k.y});
        v.push_back({it->nx, it->ny});
        v.push_back({k.x, it->ny});
      }
      if (edge && edge->side == c) {
        const double a = edge->a, b = edge->b, d = edge->depth;
        switch (c) {
          case 0: v.insert(v.end(), {{a, f.B}, {a, d}, {b, d}, {b, f.B}}); break;
          case 1: v.insert(v.end(), {{f.R, a}, {d, a}, {d, b}, {f.R, b}}); break;
          case 2: v.insert(v.end(), {{b, f.T}, {b, d}, {a, d}, {a, f.T}}); break;
          default: v.insert(v.end(), {{f.L, b}, {d, b}, {d, a}, {f.L, a}}); break;
        }
      }
    }
    return out;
  }

  std::optional<Candidate> make(std::vector<CornerNotch> notches, std::optional<EdgeNotch> edge) const {
    Candidate c{std::move(notches), edge, {}, 0};
    c.polygon = outline(c.corners, c.edge);
    if (!is_simple(c.polygon) || signed_area(c.polygon) <= 0.0) return std::nullopt;
    const BinaryGrid raster = rasterize_polygon(c.polygon, f.grid);
    for (std::size_t k = 0; k < raster.cells.size(); ++k) c.symdiff += raster.cells[k] != f.region.cells[k];
    return c;
  }
};

Frame make_frame(const SnakeContour& snake, const OrientedRect& mbr, const PolygonizeParams& p) {
  Frame f;
  const std::size_t n = snake.points.size();
  f.pts.reserve(n);
  for (const auto& q : snake.points) f.pts.push_back(rotate(q, -mbr.angle, mbr.center));
  f.vertical.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 t = f.pts[(k + 1) % n] - f.pts[(k + n - 1) % n];
    f.vertical[k] = std::abs(t.y) > std::abs(t.x);
  }
  double xmin = f.pts[0].x, xmax = xmin, ymin = f.pts[0].y, ymax = ymin;
  for (const auto& q : f.pts) {
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
    ymin = std::min(ymin, q.y);
    ymax = std::max(ymax, q.y);
  }
  f.grid.origin = {std::floor(xmin) - 2.0, std::floor(ymin) - 2.0};
  f.grid.cell_size = 1.0;
  f.grid.width = static_cast<int>(std::ceil(xmax) - f.grid.origin.x) + 2;
  f.grid.height = static_cast<int>(std::ceil(ymax) - f.grid.origin.y) + 2;
  f.region = rasterize_polygon(Polygon{f.pts}, f.grid);
  if (f.region.count() == 0) fail(ErrorKind::DegenerateInput, "fit_rectilinear: snake region has zero area");

  f.L = xmin, f.R = xmax, f.B = ymin, f.T = ymax;
  const Builder b{f, p};
  const double L = b.snap_x(xmin, ymin, ymax), R = b.snap_x(xmax, ymin, ymax);
  const double B = b.snap_y(ymin, xmin, xmax), T = b.snap_y(ymax, xmin, xmax);
  if (L < R && B < T) f.L = L, f.R = R, f.B = B, f.T = T;

  // Cells whose centers fall inside the box.
  f.i0 = std::max(0, static_cast<int>(std::ceil(f.L - f.grid.origin.x - 0.5)));
  f.i1 = std::min(f.grid.width - 1, static_cast<int>(std::floor(f.R - f.grid.origin.x - 0.5)));
  f.j0 = std::max(0, static_cast<int>(std::ceil(f.B - f.grid.origin.y - 0.5)));
  f.j1 = std::min(f.grid.height - 1, static_cast<int>(std::floor(f.T - f.grid.origin.y - 0.5)));
  return f;
}

}  // namespace

const char* to_string(ShapeLevel level) {
  switch (level) {
    case ShapeLevel::Rectangle: return "rectangle";
    case ShapeLevel::LTZ: return "LTZ";
    case ShapeLevel::U: return "U";
  }
  return "?";
}

const char* to_string(OrientationSource source) { return source == OrientationSource::Lidar ? "lidar" : "snake"; }

OrientationSource parse_orientation_source(const std::string& text) {
  if (text == "lidar") return OrientationSource::Lidar;
  if (text == "snake") return OrientationSource::Snake;
  fail(ErrorKind::InvalidArgument, "unknown orientation source '" + text + "' (expected lidar|snake)");
}

OrientedRect building_mbr(const ProjectedBoundary& init) { return min_area_rect(init.pixels); }

double trimmed_mean(std::vector<double> values, double trim) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "trimmed_mean of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t cut = static_cast<std::size_t>(std::floor(trim * static_cast<double>(values.size())));
  double sum = 0.0;
  for (std::size_t k = cut; k < values.size() - cut; ++k) sum += values[k];
  return sum / static_cast<double>(values.size() - 2 * cut);
}

BuildingPolygon fit_rectilinear(const SnakeContour& snake, const OrientedRect& mbr, const PolygonizeParams& params) {
  if (snake.points.size() < 3) fail(ErrorKind::DegenerateInput, "fit_rectilinear: fewer than 3 snake points");
  const Frame f = make_frame(snake, mbr, params);
  const Builder b{f, params};
  const long tol = static_cast<long>(std::floor(params.tolerance * static_cast<double>(f.region.count())));

  std::optional<Candidate> best_per_level[3];
  auto offer = [&](int level, std::optional<Candidate> c) {
    if (c && (!best_per_level[level] || c->symdiff < best_per_level[level]->symdiff)) best_per_level[level] = std::move(c);
  };

  offer(0, b.make({}, std::nullopt));
  std::vector<CornerNotch> notches;
  for (int c = 0; c < 4; ++c) {
    if (auto n = b.corner_notch(c)) notches.push_back(*n);
  }
  for (std::size_t x = 0; x < notches.size(); ++x) {
    offer(1, b.make({notches[x]}, std::nullopt));
    for (std::size_t y = x + 1; y < notches.size(); ++y) offer(1, b.make({notches[x], notches[y]}, std::nullopt));
  }
  for (int s = 0; s < 4; ++s) {
    if (auto e = b.edge_notch(s)) offer(2, b.make({}, e));
  }

  int chosen = -1;
  for (int level = 0; level < 3 && chosen < 0; ++level) {
    if (best_per_level[level] && best_per_level[level]->symdiff <= tol) chosen = level;
  }
  if (chosen < 0) {
    for (int level = 0; level < 3; ++level) {
      if (best_per_level[level] && (chosen < 0 || best_per_level[level]->symdiff < best_per_level[chosen]->symdiff)) {
        chosen = level;
      }
    }
  }
  if (chosen < 0) fail(ErrorKind::DegenerateInput, "fit_rectilinear: no valid candidate");

  BuildingPolygon out;
  out.polygon = rotate(best_per_level[chosen]->polygon, mbr.angle, mbr.center);
  out.shape_level = static_cast<ShapeLevel>(chosen);
  out.orientation = normalize_degrees_180(mbr.angle);
  return out;
}

BuildingPolygon polygonize(const SnakeContour& snake, const ProjectedBoundary& init, const PolygonizeParams& params) {
  const OrientedRect mbr =
      params.orientation == OrientationSource::Lidar ? building_mbr(init) : min_area_rect(snake.points);
  return fit_rectilinear(snake, mbr, params);
}

Polygon polygonize_douglas_peucker(const SnakeContour& snake, double tolerance) {
  return Polygon{douglas_peucker_closed(snake.points, tolerance)};
}

}  // namespace bfe
