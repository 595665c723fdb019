#pragma once

#include <vector>

#include "leafspec/curvekit.hpp"

namespace leafspec::curve::detail {

/// Nodes of a spiral model curve, starting at the distinguished point.
std::vector<Complex> spiral_model_nodes(const CurveSpec& spec, std::size_t n);

}  // namespace leafspec::curve::detail
