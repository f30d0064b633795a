#pragma once

#include <cstdint>
#include <vector>

#include "bfe/geometry.hpp"

namespace bfe {

/// Row-major real-valued raster. Used both for gray images (values in
/// [0, 255]) and for derived scalar fields (energies, gradients).
struct Field {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Field() = default;
  Field(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  double* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }
  const double* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }
  /// Edge-replicating access.
  double clamped(int x, int y) const;
  bool same_shape(const Field& o) const { return width == o.width && height == o.height; }
};

using GrayImage = Field;

struct RgbImage {
  GrayImage r, g, b;
};

struct Gradient {
  Field gx, gy;
};

/// Labels 1..count in raster first-touch order; 0 is background.
struct LabelGrid {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  int count = 0;

  std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

GrayImage rgb_to_gray(const GrayImage& r, const GrayImage& g, const GrayImage& b);

/// Normalized sampled Gaussian, radius ceil(3 sigma). sigma must be > 0.
std::vector<double> gaussian_kernel(double sigma);
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

Gradient gradient(const Field& img);

/// Offsets (dx, dy) with dx^2 + dy^2 < (radius + 1/2)^2; radius 1 is the 3x3 square.
std::vector<std::pair<int, int>> disk_offsets(int radius);
BinaryGrid erode(const BinaryGrid& grid, int radius);
BinaryGrid dilate(const BinaryGrid& grid, int radius);
BinaryGrid morphological_open(const BinaryGrid& grid, int radius);

LabelGrid connected_components(const BinaryGrid& grid, int connectivity);

}  // namespace bfe
