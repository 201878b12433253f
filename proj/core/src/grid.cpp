#include "hroi/grid.hpp"

#include <bit>
#include <string>

#include "hroi/error.hpp"

namespace hroi {

GridGeometry::GridGeometry(int order) : order_(order) {
  if (order < kMinOrder || order > kMaxOrder) {
    throw CapacityError("grid order " + std::to_string(order) +
                        " outside [" + std::to_string(kMinOrder) + ", " +
                        std::to_string(kMaxOrder) + "]");
  }
}

int bits_for_dimension(std::uint64_t extent) {
  if (extent < 1) {
    throw ArgumentError("dimension extent must be at least 1");
  }
  // Positions run 0..extent-1, so this is bit_width of the largest position;
  // equivalently ceil(log2(extent)), with 0 for a single-position axis.
  return std::bit_width(extent - 1);
}

GridGeometry order_for(std::uint64_t width, std::uint64_t height,
                       std::uint32_t cell_size) {
  if (width < 1 || height < 1) {
    throw ArgumentError("image dimensions must be at least 1x1");
  }
  if (cell_size < 1) {
    throw ArgumentError("cell size must be at least 1");
  }
  std::uint64_t extent = width > height ? width : height;
  // Cells along the longer axis, rounded up, then the order that covers them.
  std::uint64_t cells = (extent + cell_size - 1) / cell_size;
  int order = bits_for_dimension(cells);
  if (order < GridGeometry::kMinOrder) order = GridGeometry::kMinOrder;
  if (order > GridGeometry::kMaxOrder) {
    throw CapacityError("image of " + std::to_string(width) + "x" +
                        std::to_string(height) + " pixels at cell size " +
                        std::to_string(cell_size) +
                        " needs a grid order above 31");
  }
  return GridGeometry(order);
}

}  // namespace hroi
