#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "hroi/grid.hpp"

namespace hroi {

// Bitmap of set cells over a grid.  Storage covers only an axis-aligned
// window so region-sized masks stay cheap on huge grids; cells outside the
// window are defined to be unset.
class RasterMask {
 public:
  // Window must lie inside the grid (BoundsError) and its bit count must be
  // allocatable (CapacityError).
  RasterMask(const GridGeometry& grid, const CellRect& window);

  // Convenience for small grids: window spanning every cell.
  static RasterMask full(const GridGeometry& grid);

  const GridGeometry& grid() const { return grid_; }
  const CellRect& window() const { return window_; }
  std::uint64_t set_count() const { return set_count_; }

  // False for in-grid cells outside the window; BoundsError outside the grid.
  bool test(std::uint32_t x, std::uint32_t y) const;

  // Throw BoundsError outside the window.
  void set(std::uint32_t x, std::uint32_t y);
  void reset(std::uint32_t x, std::uint32_t y);

  // Sets [x0, x1] in row y word-wise; same bounds rules as set().
  void set_row_span(std::uint32_t y, std::uint32_t x0, std::uint32_t x1);

  // Same grid and identical set of set cells; the windows may differ.
  bool same_cells(const RasterMask& other) const;

  // Visits set cells in raster order (row by row, left to right).
  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    const std::uint64_t w = window_.width();
    for (std::uint64_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t word = words_[wi];
      while (word != 0) {
        int bit = std::countr_zero(word);
        word &= word - 1;
        std::uint64_t flat = wi * 64 + static_cast<std::uint64_t>(bit);
        fn(static_cast<std::uint32_t>(window_.min_x + flat % w),
           static_cast<std::uint32_t>(window_.min_y + flat / w));
      }
    }
  }

 private:
  std::uint64_t flat_index(std::uint32_t x, std::uint32_t y) const {
    return (static_cast<std::uint64_t>(y) - window_.min_y) * window_.width() +
           (x - window_.min_x);
  }

  GridGeometry grid_;
  CellRect window_;
  std::vector<std::uint64_t> words_;
  std::uint64_t set_count_ = 0;
};

}  // namespace hroi
