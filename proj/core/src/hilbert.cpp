#include "hroi/hilbert.hpp"

#include <string>

#include "hroi/error.hpp"

namespace hroi {
namespace {

// One quadrant step of the classic iterative transform: reflect when the
// quadrant reverses direction, then swap the axes.  n is the side of the
// (sub)grid the coordinates currently live in.
inline void rotate_quadrant(std::uint32_t n, std::uint32_t& x,
                            std::uint32_t& y, std::uint32_t rx,
                            std::uint32_t ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = n - 1 - x;
      y = n - 1 - y;
    }
    std::uint32_t t = x;
    x = y;
    y = t;
  }
}

}  // namespace

HilbertIndex hilbert_encode(const GridGeometry& grid, Cell cell) {
  if (!grid.contains(cell)) {
    throw BoundsError("cell (" + std::to_string(cell.x) + ", " +
                      std::to_string(cell.y) + ") outside order-" +
                      std::to_string(grid.order()) + " grid");
  }
  const std::uint32_t n = grid.side();
  std::uint32_t x = cell.x;
  std::uint32_t y = cell.y;
  HilbertIndex d = 0;
  for (std::uint32_t s = n >> 1; s > 0; s >>= 1) {
    std::uint32_t rx = (x & s) ? 1 : 0;
    std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<HilbertIndex>(s) * s * ((3 * rx) ^ ry);
    rotate_quadrant(n, x, y, rx, ry);
  }
  return d;
}

Cell hilbert_decode(const GridGeometry& grid, HilbertIndex index) {
  if (index >= grid.cell_count()) {
    throw RangeError("hilbert index " + std::to_string(index) +
                     " outside order-" + std::to_string(grid.order()) +
                     " grid (cell count " +
                     std::to_string(grid.cell_count()) + ")");
  }
  const std::uint32_t n = grid.side();
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  HilbertIndex t = index;
  for (std::uint32_t s = 1; s < n; s <<= 1) {
    std::uint32_t rx = 1 & static_cast<std::uint32_t>(t >> 1);
    std::uint32_t ry = 1 & static_cast<std::uint32_t>(t ^ rx);
    rotate_quadrant(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t >>= 2;
  }
  return Cell{x, y};
}

}  // namespace hroi
