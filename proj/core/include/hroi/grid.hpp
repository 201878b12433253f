#pragma once

#include <compare>
#include <cstdint>

namespace hroi {

// Position of one grid cell.  x is the column, y the row; the origin cell
// (0,0) sits at the top-left corner of the image, y growing downward.
struct Cell {
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Square 2^order x 2^order cell grid overlaid on an image.  order is capped
// at 31 so a cell index always fits in 62 bits of a uint64_t.
class GridGeometry {
 public:
  static constexpr int kMinOrder = 1;
  static constexpr int kMaxOrder = 31;

  // Throws CapacityError unless kMinOrder <= order <= kMaxOrder.
  explicit GridGeometry(int order);

  int order() const { return order_; }
  std::uint32_t side() const { return std::uint32_t{1} << order_; }
  std::uint64_t cell_count() const { return std::uint64_t{1} << (2 * order_); }

  bool contains(Cell c) const { return c.x < side() && c.y < side(); }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  int order_;
};

// Inclusive axis-aligned rectangle in cell coordinates.
struct CellRect {
  std::uint32_t min_x = 0;
  std::uint32_t min_y = 0;
  std::uint32_t max_x = 0;
  std::uint32_t max_y = 0;

  std::uint64_t width() const { return std::uint64_t{max_x} - min_x + 1; }
  std::uint64_t height() const { return std::uint64_t{max_y} - min_y + 1; }
  std::uint64_t area() const { return width() * height(); }
  bool contains(Cell c) const {
    return c.x >= min_x && c.x <= max_x && c.y >= min_y && c.y <= max_y;
  }

  friend bool operator==(const CellRect&, const CellRect&) = default;
};

// Inclusive axis-aligned rectangle in pixel coordinates, as supplied by a
// viewer ("show me annotations under this screen window").
struct QueryWindow {
  std::int64_t min_x = 0;
  std::int64_t min_y = 0;
  std::int64_t max_x = 0;
  std::int64_t max_y = 0;

  friend bool operator==(const QueryWindow&, const QueryWindow&) = default;
};

// Number of bits needed to index positions 0..extent-1, i.e. ceil(log2) of
// the extent.  Throws ArgumentError when extent < 1.
int bits_for_dimension(std::uint64_t extent);

// Smallest grid order whose footprint side()*cell_size covers an image of
// width x height pixels (never less than kMinOrder).  Throws ArgumentError
// for zero dimensions or zero cell_size, CapacityError when no legal order
// is large enough.
GridGeometry order_for(std::uint64_t width, std::uint64_t height,
                       std::uint32_t cell_size = 1);

}  // namespace hroi
