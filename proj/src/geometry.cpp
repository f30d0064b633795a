#include "bfe/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include "bfe/error.hpp"
#include "bfe/simd/kernels.hpp"

namespace bfe {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

void require_finite(std::span<const Point2> pts, const char* what) {
  for (const auto& p : pts) {
    if (!is_finite(p)) fail(ErrorKind::InvalidArgument, std::string(what) + ": non-finite coordinate");
  }
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](Point2 a, Point2 b, Point2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
  };
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

struct SoA {
  std::vector<double> xs, ys;
  explicit SoA(std::span<const Point2> pts) {
    xs.reserve(pts.size());
    ys.reserve(pts.size());
    for (const auto& p : pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  }
};

}  // namespace

Point2 rotate(Point2 p, double degrees, Point2 pivot) {
  const double c = std::cos(degrees * kDeg);
  const double s = std::sin(degrees * kDeg);
  const Point2 d = p - pivot;
  return {pivot.x + c * d.x - s * d.y, pivot.y + s * d.x + c * d.y};
}

Polygon rotate(const Polygon& p, double degrees, Point2 pivot) {
  Polygon out;
  out.vertices.reserve(p.size());
  for (const auto& v : p.vertices) out.vertices.push_back(rotate(v, degrees, pivot));
  return out;
}

Polygon translate(const Polygon& p, Point2 offset) {
  Polygon out = p;
  for (auto& v : out.vertices) v = v + offset;
  return out;
}

Polygon OrientedRect::to_polygon() const {
  const Point2 e1{std::cos(angle * kDeg), std::sin(angle * kDeg)};
  const Point2 e2{-e1.y, e1.x};
  const Point2 a = half_width * e1;
  const Point2 b = half_height * e2;
  return Polygon{{center - a - b, center + a - b, center + a + b, center - a + b}};
}

std::size_t BinaryGrid::count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

double normalize_degrees_180(double deg) {
  double r = std::fmod(deg, 180.0);
  if (r < 0) r += 180.0;
  if (r >= 180.0) r -= 180.0;
  return r;
}

std::vector<std::size_t> convex_hull_indices(std::span<const Point2> points) {
  require_finite(points, "convex_hull");
  if (points.size() < 3) fail(ErrorKind::DegenerateInput, "convex_hull: fewer than 3 points");

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& p = points[a];
    const auto& q = points[b];
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) { return points[a] == points[b]; }),
              order.end());
  if (order.size() < 3) fail(ErrorKind::DegenerateInput, "convex_hull: fewer than 3 distinct points");

  // Andrew's monotone chain; collinear points are dropped.
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t idx : order) {
    while (k >= 2 && orient(points[hull[k - 2]], points[hull[k - 1]], points[idx]) <= 0) --k;
    hull[k++] = idx;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    const std::size_t idx = order[i];
    while (k >= lower && orient(points[hull[k - 2]], points[hull[k - 1]], points[idx]) <= 0) --k;
    hull[k++] = idx;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) fail(ErrorKind::DegenerateInput, "convex_hull: points are collinear");
  return hull;
}

Polygon convex_hull(std::span<const Point2> points) {
  Polygon out;
  for (std::size_t i : convex_hull_indices(points)) out.vertices.push_back(points[i]);
  return out;
}

OrientedRect min_area_rect(std::span<const Point2> points) {
  const Polygon hull = convex_hull(points);
  const auto& h = hull.vertices;
  const std::size_t n = h.size();

  OrientedRect best;
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 edge = h[(i + 1) % n] - h[i];
    const double len = norm(edge);
    if (len == 0) continue;
    const Point2 e1 = (1.0 / len) * edge;
    const Point2 e2{-e1.y, e1.x};
    double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
    double lo2 = lo1, hi2 = -lo1;
    for (const auto& p : h) {
      const double a = dot(p, e1);
      const double b = dot(p, e2);
      lo1 = std::min(lo1, a);
      hi1 = std::max(hi1, a);
      lo2 = std::min(lo2, b);
      hi2 = std::max(hi2, b);
    }
    OrientedRect r;
    r.half_width = 0.5 * (hi1 - lo1);
    r.half_height = 0.5 * (hi2 - lo2);
    const double c1 = 0.5 * (lo1 + hi1);
    const double c2 = 0.5 * (lo2 + hi2);
    r.center = c1 * e1 + c2 * e2;
    r.angle = normalize_degrees_180(std::atan2(e1.y, e1.x) / kDeg);
    // A rectangle at angle a is the same set as one at a + 90 with the
    // extents swapped; keep the representative in [0, 90).
    if (r.angle >= 90.0) {
      r.angle -= 90.0;
      std::swap(r.half_width, r.half_height);
    }
    const double area = r.area();
    const double tie = 1e-9 * std::max(area, best_area == std::numeric_limits<double>::infinity() ? area : best_area);
    if (area < best_area - tie || (std::abs(area - best_area) <= tie && r.angle < best.angle)) {
      best = r;
      best_area = std::min(area, best_area);
    }
  }
  return best;
}

double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) fail(ErrorKind::InvalidArgument, "hausdorff_distance: empty point set");
  const SoA bs(b);
  const auto& k = simd::kernels();
  double worst = 0.0;
  for (const auto& p : a) {
    worst = std::max(worst, k.min_sq_distance(p.x, p.y, bs.xs.data(), bs.ys.data(), bs.xs.size()));
  }
  return std::sqrt(worst);
}

double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double signed_area(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += cross(v[i], v[(i + 1) % n]);
  return 0.5 * acc;
}

bool is_simple(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a1 = v[i], a2 = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Point2 b1 = v[j], b2 = v[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share one vertex; they may only overlap if they fold back.
        const Point2 shared = (j == i + 1) ? a2 : a1;
        const Point2 pa = (j == i + 1) ? a1 : a2;
        const Point2 pb = (j == i + 1) ? b2 : b1;
        if (orient(pa, shared, pb) == 0 && dot(pa - shared, pb - shared) > 0) return false;
        continue;
      }
      if (segments_intersect(a1, a2, b1, b2)) return false;
    }
  }
  return true;
}

double polygon_area(const Polygon& p) {
  require_finite(p.vertices, "polygon_area");
  if (!is_simple(p)) fail(ErrorKind::InvalidArgument, "polygon_area: polygon is not simple");
  return std::abs(signed_area(p));
}

double polygon_perimeter(const Polygon& p) {
  const auto& v = p.vertices;
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += distance(v[i], v[(i + 1) % v.size()]);
  return acc;
}

Point2 polygon_centroid(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) fail(ErrorKind::DegenerateInput, "polygon_centroid: fewer than 3 vertices");
  // Shift to the first vertex for conditioning.
  const Point2 o = v[0];
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p0 = v[i] - o;
    const Point2 p1 = v[(i + 1) % n] - o;
    const double c = cross(p0, p1);
    a2 += c;
    cx += (p0.x + p1.x) * c;
    cy += (p0.y + p1.y) * c;
  }
  const double scale = std::max(1.0, polygon_perimeter(p) * polygon_perimeter(p));
  if (std::abs(a2) <= 1e-14 * scale) fail(ErrorKind::DegenerateInput, "polygon_centroid: zero area");
  return {o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2)};
}

bool point_in_polygon(const Polygon& p, Point2 q) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > q.y) != (v[j].y > q.y)) {
      const double x_int = (v[j].x - v[i].x) * (q.y - v[i].y) / (v[j].y - v[i].y) + v[i].x;
      if (q.x < x_int) inside = !inside;
    }
  }
  return inside;
}

BinaryGrid rasterize_polygon(const Polygon& p, const GridSpec& grid) {
  if (!(grid.cell_size > 0) || grid.width < 0 || grid.height < 0) {
    fail(ErrorKind::InvalidArgument, "rasterize_polygon: invalid grid");
  }
  BinaryGrid mask{grid, std::vector<std::uint8_t>(static_cast<std::size_t>(grid.width) * grid.height, 0)};
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  if (n < 3) return mask;

  double ymin = v[0].y, ymax = v[0].y, xmin = v[0].x, xmax = v[0].x;
  for (const auto& q : v) {
    ymin = std::min(ymin, q.y);
    ymax = std::max(ymax, q.y);
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
  }
  const double cs = grid.cell_size;
  const int j0 = std::max(0, static_cast<int>(std::floor((ymin - grid.origin.y) / cs - 0.5)));
  const int j1 = std::min(grid.height - 1, static_cast<int>(std::ceil((ymax - grid.origin.y) / cs - 0.5)));
  const int i0 = std::max(0, static_cast<int>(std::floor((xmin - grid.origin.x) / cs - 0.5)));
  const int i1 = std::min(grid.width - 1, static_cast<int>(std::ceil((xmax - grid.origin.x) / cs - 0.5)));

  std::vector<double> xs;
  for (int j = j0; j <= j1; ++j) {
    const double yc = grid.origin.y + (j + 0.5) * cs;
    xs.clear();
    // Same crossing test and intercept formula as point_in_polygon, so the
    // fill agrees with per-pixel center inclusion bit for bit.
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      if ((v[a].y > yc) != (v[b].y > yc)) {
        xs.push_back((v[b].x - v[a].x) * (yc - v[a].y) / (v[b].y - v[a].y) + v[a].x);
      }
    }
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end());
    std::size_t passed = 0;  // intercepts <= current center
    auto* row = mask.cells.data() + static_cast<std::size_t>(j) * grid.width;
    for (int i = i0; i <= i1; ++i) {
      const double xc = grid.origin.x + (i + 0.5) * cs;
      while (passed < xs.size() && xs[passed] <= xc) ++passed;
      if ((xs.size() - passed) % 2 == 1) row[i] = 1;
    }
  }
  return mask;
}

double dominant_angle(const Polygon& p) {
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  double best = 0.0;
  Point2 dir{};
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e = v[(i + 1) % n] - v[i];
    const double len = norm(e);
    if (len > best) {
      best = len;
      dir = e;
    }
  }
  if (n < 2 || best == 0.0) fail(ErrorKind::DegenerateInput, "dominant_angle: fewer than 2 distinct vertices");
  return normalize_degrees_180(std::atan2(dir.y, dir.x) / kDeg);
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

std::vector<Point2> douglas_peucker(std::span<const Point2> line, double tol) {
  if (line.size() < 2) fail(ErrorKind::InvalidArgument, "douglas_peucker: fewer than 2 points");
  if (!(tol > 0)) fail(ErrorKind::InvalidArgument, "douglas_peucker: tolerance must be positive");
  std::vector<std::uint8_t> keep(line.size(), 0);
  keep.front() = keep.back() = 1;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, line.size() - 1}};
  while (!stack.empty()) {
    const auto [first, last] = stack.back();
    stack.pop_back();
    double worst = 0.0;
    std::size_t at = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      const double d = point_segment_distance(line[i], line[first], line[last]);
      if (d > worst) {
        worst = d;
        at = i;
      }
    }
    if (worst > tol) {
      keep[at] = 1;
      stack.emplace_back(first, at);
      stack.emplace_back(at, last);
    }
  }
  std::vector<Point2> out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (keep[i]) out.push_back(line[i]);
  }
  return out;
}

std::vector<Point2> douglas_peucker_closed(std::span<const Point2> ring, double tol) {
  if (ring.size() < 3) fail(ErrorKind::InvalidArgument, "douglas_peucker_closed: fewer than 3 points");
  std::size_t far = 0;
  double worst = -1.0;
  for (std::size_t i = 1; i < ring.size(); ++i) {
    const double d = distance(ring[0], ring[i]);
    if (d > worst) {
      worst = d;
      far = i;
    }
  }
  std::vector<Point2> first(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(far) + 1);
  std::vector<Point2> second(ring.begin() + static_cast<std::ptrdiff_t>(far), ring.end());
  second.push_back(ring[0]);
  auto a = douglas_peucker(first, tol);
  auto b = douglas_peucker(second, tol);
  a.pop_back();
  b.pop_back();
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Point2> resample_closed(std::span<const Point2> ring, std::size_t count) {
  if (ring.size() < 2 || count == 0) fail(ErrorKind::InvalidArgument, "resample_closed: need >= 2 vertices");
  const std::size_t n = ring.size();
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + distance(ring[i], ring[(i + 1) % n]);
  const double total = cum[n];
  if (!(total > 0)) fail(ErrorKind::DegenerateInput, "resample_closed: zero perimeter");
  std::vector<Point2> out;
  out.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(count);
    while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0 ? (s - cum[seg]) / len : 0.0;
    const Point2 a = ring[seg];
    const Point2 b = ring[(seg + 1) % n];
    out.push_back(a + t * (b - a));
  }
  return out;
}

std::string to_wkt(const Polygon& p) {
  std::string out = "POLYGON((";
  char buf[96];
  const auto& v = p.vertices;
  for (std::size_t i = 0; i <= v.size(); ++i) {
    const Point2 q = v[i % v.size()];
    std::snprintf(buf, sizeof buf, "%s%.6f %.6f", i == 0 ? "" : ", ", q.x, q.y);
    out += buf;
  }
  out += "))";
  return out;
}

Polygon parse_wkt(std::string_view text) {
  auto bad = [&](const char* why) {
    fail(ErrorKind::Parse, std::string("WKT: ") + why + " in '" + std::string(text.substr(0, 60)) + "'");
  };
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  constexpr std::string_view kw = "POLYGON";
  if (text.size() - pos < kw.size()) bad("expected POLYGON");
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[pos + i])) != kw[i]) bad("expected POLYGON");
  }
  pos += kw.size();
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) bad("unexpected character");
    ++pos;
  };
  expect('(');
  expect('(');
  Polygon poly;
  while (true) {
    double xy[2];
    for (double& value : xy) {
      skip_ws();
      const char* begin = text.data() + pos;
      const auto [end, ec] = std::from_chars(begin, text.data() + text.size(), value);
      if (ec != std::errc{} || end == begin) bad("expected number");
      pos += static_cast<std::size_t>(end - begin);
    }
    poly.vertices.push_back({xy[0], xy[1]});
    skip_ws();
    if (pos < text.size() && text[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  expect(')');
  skip_ws();
  if (pos < text.size() && text[pos] == ',') bad("interior rings are not supported");
  expect(')');
  skip_ws();
  if (pos != text.size()) bad("trailing characters");
  if (poly.vertices.size() >= 2 && poly.vertices.front() == poly.vertices.back()) poly.vertices.pop_back();
  if (poly.vertices.size() < 3) bad("ring needs at least 3 distinct vertices");
  return poly;
}

}  // namespace bfe
