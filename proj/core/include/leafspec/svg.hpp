#pragma once

// Deterministic SVG plots of leaves.

#include <string>
#include <vector>

#include "leafspec/leafgeom.hpp"

namespace leafspec::cli {

/// 800 x 800 canvas, square world window padded by 10% around z1, z2 and the
/// samples. One path per boundary label (the two halves of a degenerate
/// leaf form a single path), the median as a filled circle and the
/// endpoints as crosses.
std::string render_leaf_svg(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples);

/// Writes render_leaf_svg to `path`; throws IoError when it cannot.
void emit_leaf_svg(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples,
                   const std::string& path);

/// Canvas coordinates of a world point for the window used by render_leaf_svg.
struct CanvasMap {
  double x0 = 0.0;     // world x at the left edge
  double y1 = 0.0;     // world y at the top edge
  double scale = 1.0;  // canvas units per world unit

  double cx(double x) const { return (x - x0) * scale; }
  double cy(double y) const { return (y1 - y) * scale; }
};

CanvasMap leaf_canvas_map(const leaf::Leaf& leaf, const std::vector<leaf::BoundarySample>& samples);

inline constexpr double kCanvasSize = 800.0;

}  // namespace leafspec::cli
