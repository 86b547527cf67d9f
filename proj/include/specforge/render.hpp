#pragma once

#include <filesystem>
#include <string>

#include "specforge/dataset.hpp"
#include "specforge/spec.hpp"

namespace specforge {

struct RenderOptions {
  int width = 640;
  int height = 640;
  // Plot frame extends the data bounding box by this fraction per side.
  double margin = 0.05;
  std::string title;
};

// SVG scatter of a 2-D dataset with each spec drawn as an outlined
// rectangle, coloured by its class. Infinite sides are clipped to the frame.
std::string render_svg(const SpecSet& set, const Dataset& data,
                       const RenderOptions& options = {});

void write_svg(const std::string& svg, const std::filesystem::path& path);

}  // namespace specforge
