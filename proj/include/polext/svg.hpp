#pragma once

#include <string>
#include <vector>

#include "polext/extrema.hpp"
#include "polext/systems.hpp"

namespace polext::svg {

struct PlotOptions {
  /// Orthographic view direction for d = 3 (normalized internally).
  numerics::Vector view = {1.0, 1.0, 1.0};
  double size = 600.0;
  int circle_samples = 360;
};

/// Static SVG 1.1 figure. d = 2: unit circle, one diameter per hyperplane
/// v_j^perp, extremal points as dots. d = 3: orthographic sphere, one great
/// circle per v_j (front arcs solid, back arcs dashed), dots sized by mu.
/// Throws DimensionError for other dimensions. Coordinates are printed with
/// six decimals so output is diffable.
std::string render(const systems::VectorSystem& sys,
                   const std::vector<extrema::ExtremalPoint>& points,
                   const PlotOptions& options = {});

}  // namespace polext::svg
