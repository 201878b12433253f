#pragma once

#include <vector>

namespace hroi {

// Polygon vertex in pixel coordinates (y grows downward).  Doubles so traced
// cell outlines can sit on half-pixel corners; every consumer that needs
// exact arithmetic requires 2*x and 2*y to be integral.
struct Vertex {
  double x = 0;
  double y = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

using Ring = std::vector<Vertex>;

// Simple polygon with optional holes.  Rings are stored in open form (the
// closing edge back to the first vertex is implicit); parsers strip an
// explicitly repeated last vertex.
struct PolygonGeom {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const PolygonGeom&, const PolygonGeom&) = default;
};

}  // namespace hroi
