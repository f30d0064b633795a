#include "bfe/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bfe/error.hpp"
#include "bfe/simd/kernels.hpp"

namespace bfe {

double Field::clamped(int x, int y) const {
  x = std::clamp(x, 0, width - 1);
  y = std::clamp(y, 0, height - 1);
  return at(x, y);
}

GrayImage rgb_to_gray(const GrayImage& r, const GrayImage& g, const GrayImage& b) {
  if (!r.same_shape(g) || !r.same_shape(b)) fail(ErrorKind::InvalidArgument, "rgb_to_gray: channel size mismatch");
  GrayImage out(r.width, r.height);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = 0.299 * r.data[i] + 0.587 * g.data[i] + 0.114 * b.data[i];
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0)) fail(ErrorKind::InvalidArgument, "gaussian_kernel: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * static_cast<std::size_t>(radius) + 1);
  for (int i = -radius; i <= radius; ++i) {
    k[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& w : k) w /= sum;
  return k;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  if (sigma < 0) fail(ErrorKind::InvalidArgument, "gaussian_smooth: sigma must be >= 0");
  if (sigma == 0 || img.width == 0 || img.height == 0) return img;

  const auto kernel = gaussian_kernel(sigma);
  const int r = static_cast<int>(kernel.size() / 2);
  const std::size_t taps = kernel.size();
  const auto& simd = simd::kernels();
  const int w = img.width;
  const int h = img.height;

  // Horizontal pass over an edge-replicated row.
  Field tmp(w, h);
  std::vector<double> padded(static_cast<std::size_t>(w + 2 * r));
  std::vector<const double*> rows(taps);
  for (int y = 0; y < h; ++y) {
    for (int i = 0; i < w + 2 * r; ++i) padded[static_cast<std::size_t>(i)] = img.clamped(i - r, y);
    for (std::size_t k = 0; k < taps; ++k) rows[k] = padded.data() + k;
    simd.weighted_row_sum(rows.data(), kernel.data(), taps, tmp.row(y), static_cast<std::size_t>(w));
  }

  // Vertical pass: a weighted sum of clamped rows.
  Field out(w, h);
  for (int y = 0; y < h; ++y) {
    for (std::size_t k = 0; k < taps; ++k) {
      const int yy = std::clamp(y + static_cast<int>(k) - r, 0, h - 1);
      rows[k] = tmp.row(yy);
    }
    simd.weighted_row_sum(rows.data(), kernel.data(), taps, out.row(y), static_cast<std::size_t>(w));
  }
  return out;
}

Gradient gradient(const Field& img) {
  if (img.width < 3 || img.height < 3) fail(ErrorKind::InvalidArgument, "gradient: image smaller than 3x3");
  const int w = img.width;
  const int h = img.height;
  Gradient g{Field(w, h), Field(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0) {
        g.gx.at(x, y) = img.at(1, y) - img.at(0, y);
      } else if (x == w - 1) {
        g.gx.at(x, y) = img.at(w - 1, y) - img.at(w - 2, y);
      } else {
        g.gx.at(x, y) = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
      }
      if (y == 0) {
        g.gy.at(x, y) = img.at(x, 1) - img.at(x, 0);
      } else if (y == h - 1) {
        g.gy.at(x, y) = img.at(x, h - 1) - img.at(x, h - 2);
      } else {
        g.gy.at(x, y) = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));
      }
    }
  }
  return g;
}

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius + radius) out.emplace_back(dx, dy);
    }
  }
  return out;
}

namespace {

// Cells outside the grid count as unset for both operations.
BinaryGrid morph(const BinaryGrid& grid, int radius, bool erosion) {
  if (radius < 1) fail(ErrorKind::InvalidArgument, "morphology: radius must be >= 1");
  const int w = grid.grid.width;
  const int h = grid.grid.height;
  const auto offsets = disk_offsets(radius);
  BinaryGrid out{grid.grid, std::vector<std::uint8_t>(grid.cells.size(), 0)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = erosion;
      for (const auto& [dx, dy] : offsets) {
        const int xx = x + dx;
        const int yy = y + dy;
        const bool set = xx >= 0 && yy >= 0 && xx < w && yy < h && grid.at(xx, yy);
        if (erosion && !set) {
          hit = false;
          break;
        }
        if (!erosion && set) {
          hit = true;
          break;
        }
      }
      out.cells[static_cast<std::size_t>(y) * w + x] = hit ? 1 : 0;
    }
  }
  return out;
}

struct DisjointSet {
  std::vector<std::int32_t> parent;

  std::int32_t make() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
};

}  // namespace

BinaryGrid erode(const BinaryGrid& grid, int radius) { return morph(grid, radius, true); }
BinaryGrid dilate(const BinaryGrid& grid, int radius) { return morph(grid, radius, false); }

BinaryGrid morphological_open(const BinaryGrid& grid, int radius) {
  return dilate(erode(grid, radius), radius);
}

LabelGrid connected_components(const BinaryGrid& grid, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    fail(ErrorKind::InvalidArgument, "connected_components: connectivity must be 4 or 8");
  }
  const int w = grid.grid.width;
  const int h = grid.grid.height;
  LabelGrid out{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * h, 0), 0};

  // Two-pass labeling with provisional labels in scan order.
  DisjointSet sets;
  sets.make();  // slot 0 = background
  std::vector<std::int32_t> prov(out.labels.size(), 0);
  auto prov_at = [&](int x, int y) -> std::int32_t {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return prov[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!grid.at(x, y)) continue;
      std::int32_t nb[4] = {prov_at(x - 1, y), prov_at(x, y - 1), 0, 0};
      if (connectivity == 8) {
        nb[2] = prov_at(x - 1, y - 1);
        nb[3] = prov_at(x + 1, y - 1);
      }
      std::int32_t label = 0;
      for (std::int32_t n : nb) {
        if (n != 0 && (label == 0 || n < label)) label = n;
      }
      if (label == 0) label = sets.make();
      for (std::int32_t n : nb) {
        if (n != 0) sets.unite(label, n);
      }
      prov[static_cast<std::size_t>(y) * w + x] = label;
    }
  }

  std::vector<std::int32_t> final_label(sets.parent.size(), 0);
  for (std::size_t i = 0; i < prov.size(); ++i) {
    if (prov[i] == 0) continue;
    const std::int32_t root = sets.find(prov[i]);
    auto& f = final_label[static_cast<std::size_t>(root)];
    if (f == 0) f = ++out.count;
    out.labels[i] = f;
  }
  return out;
}

}  // namespace bfe
