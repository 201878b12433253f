#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hroi/grid.hpp"
#include "hroi/polygon.hpp"
#include "hroi/range_set.hpp"
#include "hroi/raster.hpp"

namespace hroi {

// Integer pixel sample position.
struct PixelPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Fill rule used throughout: a grid cell is centered on the pixel lattice,
// i.e. cell (i,j) at cell_size s owns the open square of side s centered on
// pixel (s*i + (s-1)/2, ...); equivalently, in units of cells, the open
// square (i-1/2, i+1/2) x (j-1/2, j+1/2).  A cell is set iff
//   - its center lies strictly inside the polygon under the even-odd rule, or
//   - any ring edge (outer or hole) passes through the cell's open square.
// Touching a cell only at its corner does not set it.  Hole interiors stay
// clear; hole boundaries are set like any other ring.
//
// All geometry is evaluated exactly in integer arithmetic on a doubled
// lattice, which requires every vertex v to satisfy 2*v integral (half-pixel
// lattice; GeometryError otherwise).  Vertices must lie within the grid
// footprint, i.e. -0.5 <= v <= side*cell_size - 0.5 per axis (BoundsError).
// Rings need at least 3 distinct vertices (GeometryError).
//
// The returned mask's window is the cell bounding box of the polygon.
RasterMask rasterize_polygon(const PolygonGeom& polygon,
                             const GridGeometry& grid,
                             std::uint32_t cell_size = 1);

// Canonical ranges of a mask.  Only cells on the region boundary (some
// 4-neighbor unset, or on the grid rim) are Hilbert-encoded: curve neighbors
// n-1 and n+1 are always grid 4-neighbors, so runs can only start or stop at
// such cells.  Cost is O(set cells + boundary cells * order).
RangeSet mask_to_ranges(const RasterMask& mask);

// Inverse of mask_to_ranges: decodes every covered index.  The mask window
// is the tight cell bounding box of the ranges.  Throws RangeError when a
// range reaches past cell_count().
RasterMask ranges_to_mask(const RangeSet& ranges, const GridGeometry& grid);

// Traces the cell set back into polygons, one per 4-connected component,
// with holes attached to their enclosing outer ring.  Vertices are cell
// corners (half-integer cell coordinates, so pixel coordinates when
// cell_size is 1); collinear runs are merged.  Outer rings wind clockwise
// on screen (y down), holes counterclockwise.  Components that touch only
// diagonally come back as separate polygons, so
// rasterize(ranges_to_polygon(r)) at cell_size 1 reproduces r exactly.
std::vector<PolygonGeom> ranges_to_polygon(const RangeSet& ranges,
                                           const GridGeometry& grid);

// Pixel window -> the cell rectangle it overlaps, by flooring pixel/cell_size
// and clamping to the grid; nullopt when the window misses the grid
// footprint entirely.  Throws ArgumentError when min > max on either axis.
std::optional<CellRect> window_to_cells(const QueryWindow& window,
                                        const GridGeometry& grid,
                                        std::uint32_t cell_size = 1);

// Canonical ranges of all cells overlapping a pixel window, via the same
// boundary-only walk as mask_to_ranges (only the rectangle perimeter is
// encoded).  A window outside the grid yields the empty set.
RangeSet rect_to_ranges(const QueryWindow& window, const GridGeometry& grid,
                        std::uint32_t cell_size = 1);

// Single pixel -> the one-cell range {H(p), H(p)}.  BoundsError when the
// pixel is outside the grid footprint [0, side*cell_size).
RangeSet encode_point(PixelPoint point, const GridGeometry& grid,
                      std::uint32_t cell_size = 1);

// Open polyline -> ranges of every cell whose open square the path passes
// through (plus the endpoints' cells).  Needs >= 2 points (ArgumentError),
// all within the grid footprint (BoundsError).
RangeSet encode_polyline(const std::vector<PixelPoint>& points,
                         const GridGeometry& grid,
                         std::uint32_t cell_size = 1);

}  // namespace hroi
