#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "bfe/raster.hpp"

namespace bfe {

using PnmImage = std::variant<GrayImage, RgbImage>;

/// Parses PGM (P2/P5) or PPM (P3/P6). Samples are rescaled from [0, maxval]
/// to [0, 255]. '#' comments are accepted anywhere in the header.
PnmImage load_pnm(std::string_view bytes);

/// Loads a PNM file; color input is converted with rgb_to_gray.
GrayImage load_gray(const std::filesystem::path& path);

/// 8-bit output; samples are rounded and clamped to [0, 255].
std::string save_pgm(const GrayImage& img, bool binary = true);
std::string save_ppm(const RgbImage& img, bool binary = true);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace bfe
