#include "hroi/raster.hpp"

#include <string>

#include "hroi/error.hpp"

namespace hroi {

namespace {
// 2^36 bits (8 GiB) is far beyond any sane working mask; refuse instead of
// letting the allocator die trying.
constexpr std::uint64_t kMaxWindowBits = std::uint64_t{1} << 36;
}  // namespace

RasterMask::RasterMask(const GridGeometry& grid, const CellRect& window)
    : grid_(grid), window_(window) {
  if (window.min_x > window.max_x || window.min_y > window.max_y ||
      !grid.contains(Cell{window.max_x, window.max_y})) {
    throw BoundsError("mask window [" + std::to_string(window.min_x) + ", " +
                      std::to_string(window.max_x) + "] x [" +
                      std::to_string(window.min_y) + ", " +
                      std::to_string(window.max_y) +
                      "] not inside order-" + std::to_string(grid.order()) +
                      " grid");
  }
  std::uint64_t bits = window.area();
  if (bits > kMaxWindowBits) {
    throw CapacityError("mask window of " + std::to_string(bits) +
                        " cells is too large to materialize");
  }
  words_.assign((bits + 63) / 64, 0);
}

RasterMask RasterMask::full(const GridGeometry& grid) {
  std::uint32_t last = grid.side() - 1;
  return RasterMask(grid, CellRect{0, 0, last, last});
}

bool RasterMask::test(std::uint32_t x, std::uint32_t y) const {
  if (!grid_.contains(Cell{x, y})) {
    throw BoundsError("cell (" + std::to_string(x) + ", " +
                      std::to_string(y) + ") outside order-" +
                      std::to_string(grid_.order()) + " grid");
  }
  if (!window_.contains(Cell{x, y})) return false;
  std::uint64_t flat = flat_index(x, y);
  return (words_[flat / 64] >> (flat % 64)) & 1;
}

void RasterMask::set(std::uint32_t x, std::uint32_t y) {
  if (!window_.contains(Cell{x, y})) {
    throw BoundsError("cell (" + std::to_string(x) + ", " +
                      std::to_string(y) + ") outside mask window");
  }
  std::uint64_t flat = flat_index(x, y);
  std::uint64_t bit = std::uint64_t{1} << (flat % 64);
  if (!(words_[flat / 64] & bit)) {
    words_[flat / 64] |= bit;
    ++set_count_;
  }
}

void RasterMask::reset(std::uint32_t x, std::uint32_t y) {
  if (!window_.contains(Cell{x, y})) {
    throw BoundsError("cell (" + std::to_string(x) + ", " +
                      std::to_string(y) + ") outside mask window");
  }
  std::uint64_t flat = flat_index(x, y);
  std::uint64_t bit = std::uint64_t{1} << (flat % 64);
  if (words_[flat / 64] & bit) {
    words_[flat / 64] &= ~bit;
    --set_count_;
  }
}

void RasterMask::set_row_span(std::uint32_t y, std::uint32_t x0,
                              std::uint32_t x1) {
  if (x0 > x1 || !window_.contains(Cell{x0, y}) ||
      !window_.contains(Cell{x1, y})) {
    throw BoundsError("row span [" + std::to_string(x0) + ", " +
                      std::to_string(x1) + "] at y=" + std::to_string(y) +
                      " outside mask window");
  }
  std::uint64_t lo = flat_index(x0, y);
  std::uint64_t hi = flat_index(x1, y);
  std::uint64_t wlo = lo / 64, whi = hi / 64;
  for (std::uint64_t w = wlo; w <= whi; ++w) {
    std::uint64_t bits = ~std::uint64_t{0};
    if (w == wlo) bits &= ~std::uint64_t{0} << (lo % 64);
    if (w == whi) bits &= ~std::uint64_t{0} >> (63 - hi % 64);
    set_count_ += std::popcount(bits & ~words_[w]);
    words_[w] |= bits;
  }
}

bool RasterMask::same_cells(const RasterMask& other) const {
  if (grid_ != other.grid_ || set_count_ != other.set_count_) return false;
  bool equal = true;
  for_each_set([&](std::uint32_t x, std::uint32_t y) {
    if (equal && !other.test(x, y)) equal = false;
  });
  return equal;
}

}  // namespace hroi
