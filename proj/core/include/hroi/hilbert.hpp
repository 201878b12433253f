#pragma once

#include <cstdint>

#include "hroi/grid.hpp"

namespace hroi {

// Position of a cell along the Hilbert curve, in [0, 4^order).
using HilbertIndex = std::uint64_t;

// Curve convention: the traversal enters the grid at cell (0,0) (top-left)
// and leaves at (side-1, 0) (top-right).  For order 1 the visit order is
// (0,0), (0,1), (1,1), (1,0).  Raising the order refines each cell into the
// four indices {4n, .., 4n+3}, so prefixes of an index are coarse addresses.
//
// hilbert_encode throws BoundsError for cells outside the grid;
// hilbert_decode throws RangeError for indices at or above cell_count().
HilbertIndex hilbert_encode(const GridGeometry& grid, Cell cell);
Cell hilbert_decode(const GridGeometry& grid, HilbertIndex index);

}  // namespace hroi
