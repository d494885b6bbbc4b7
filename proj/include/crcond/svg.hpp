#pragma once

#include "crcond/types.hpp"

#include <string>

namespace crcond {

/// Standalone SVG scatter plot: instances colored by label, centers (when
/// given) overplotted as larger outlined markers colored by center label.
/// Axes are autoscaled with a 5% margin. Byte-deterministic for identical
/// inputs.
std::string render_scatter_svg(const Matrix& points, const IntVector& labels,
                               const Matrix* centers = nullptr,
                               const IntVector* center_labels = nullptr);

}  // namespace crcond
