#include "bfe/registration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "bfe/error.hpp"

namespace bfe {

AffineTransform2D AffineTransform2D::rotation(double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(r);
  const double s = std::sin(r);
  return {c, -s, s, c, 0, 0};
}

bool AffineTransform2D::valid() const {
  const double det = determinant();
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d) &&
         std::isfinite(tx) && std::isfinite(ty) && det != 0.0 && std::isfinite(det);
}

AffineTransform2D AffineTransform2D::inverse() const {
  if (!valid()) fail(ErrorKind::InvalidArgument, "affine transform is singular");
  const double det = determinant();
  AffineTransform2D inv{d / det, -b / det, -c / det, a / det, 0, 0};
  inv.tx = -(inv.a * tx + inv.b * ty);
  inv.ty = -(inv.c * tx + inv.d * ty);
  return inv;
}

AffineTransform2D AffineTransform2D::compose(const AffineTransform2D& f) const {
  return {a * f.a + b * f.c, a * f.b + b * f.d, c * f.a + d * f.c, c * f.b + d * f.d,
          a * f.tx + b * f.ty + tx, c * f.tx + d * f.ty + ty};
}

Point2 apply(const AffineTransform2D& t, Point2 p) {
  return {t.a * p.x + t.b * p.y + t.tx, t.c * p.x + t.d * p.y + t.ty};
}

Polygon apply(const AffineTransform2D& t, const Polygon& p) {
  Polygon out;
  out.vertices.reserve(p.size());
  for (const auto& v : p.vertices) out.vertices.push_back(apply(t, v));
  return out;
}

AffineTransform2D fit_least_squares(std::span<const Correspondence> pairs) {
  if (pairs.size() < 3) fail(ErrorKind::DegenerateInput, "fit_least_squares: need at least 3 correspondences");

  // Both output rows share the design matrix [x y 1]. Centering the sources
  // keeps the system well conditioned for georeferenced coordinates.
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Point2 mean{};
  for (const auto& [s, t] : pairs) mean = mean + s;
  mean = (1.0 / static_cast<double>(pairs.size())) * mean;

  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [s, t] = pairs[static_cast<std::size_t>(i)];
    design(i, 0) = s.x - mean.x;
    design(i, 1) = s.y - mean.y;
    design(i, 2) = 1.0;
    rhs(i, 0) = t.x;
    rhs(i, 1) = t.y;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) fail(ErrorKind::DegenerateInput, "fit_least_squares: correspondences are collinear (rank-deficient)");
  const Eigen::MatrixXd sol = qr.solve(rhs);

  AffineTransform2D t{sol(0, 0), sol(1, 0), sol(0, 1), sol(1, 1), sol(2, 0), sol(2, 1)};
  // Undo the centering: x' = A (x - m) + k  =>  tx = k - A m.
  t.tx -= t.a * mean.x + t.b * mean.y;
  t.ty -= t.c * mean.x + t.d * mean.y;
  if (!t.valid()) fail(ErrorKind::DegenerateInput, "fit_least_squares: fitted transform is singular");
  return t;
}

AffineTransform2D parse_transform(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, content;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    content += line + " ";
  }
  std::istringstream nums(content);
  double v[6];
  for (double& x : v) {
    if (!(nums >> x)) fail(ErrorKind::Parse, "transform: expected 6 numbers `a b c d tx ty`");
  }
  std::string extra;
  if (nums >> extra) fail(ErrorKind::Parse, "transform: trailing content '" + extra + "'");
  AffineTransform2D t{v[0], v[1], v[2], v[3], v[4], v[5]};
  if (!t.valid()) fail(ErrorKind::InvalidArgument, "transform: singular or non-finite coefficients");
  return t;
}

std::string format_transform(const AffineTransform2D& t) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", t.a, t.b, t.c, t.d, t.tx, t.ty);
  return buf;
}

std::vector<Correspondence> parse_correspondences(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Correspondence> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double v[4];
    int got = 0;
    while (got < 4 && ls >> v[got]) ++got;
    if (got == 0 && ls.eof()) continue;
    if (got != 4) fail(ErrorKind::Parse, "correspondences: line " + std::to_string(lineno) + " needs `sx sy tx ty`");
    out.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return out;
}

}  // namespace bfe
