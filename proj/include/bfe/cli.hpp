#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bfe/geometry.hpp"
#include "bfe/metrics.hpp"
#include "bfe/pipeline.hpp"

namespace bfe {

enum ExitCode : int { kExitOk = 0, kExitPipeline = 1, kExitUsage = 2 };

/// Entry point of the `bfe` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One POLYGON per non-empty line; lines starting with '#' are skipped.
std::vector<Polygon> parse_wkt_lines(std::string_view text);

nlohmann::json to_json(const EvaluationReport& report);

/// Contours in image pixels; truth polygons are given in meters.
std::string svg_overlay(int width, int height, const ExtractResult& result, const std::vector<Polygon>& truth_m,
                        double pixel_size);

}  // namespace bfe
