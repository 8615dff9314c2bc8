#pragma once

#include <array>
#include <cmath>

namespace webgeom {

/// Point of the four-manifold in the coordinates (x1, x2, y1, y2).
struct BasePoint {
  std::array<double, 4> coords{};

  double x1() const { return coords[0]; }
  double x2() const { return coords[1]; }
  double y1() const { return coords[2]; }
  double y2() const { return coords[3]; }

  bool finite() const {
    for (double c : coords)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

}  // namespace webgeom
