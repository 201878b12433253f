#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

#include "hroi/error.hpp"
#include "hroi/hilbert.hpp"
#include "hroi/region_codec.hpp"

namespace hroi {
namespace {

// Pairs up sorted run starts and ends produced by a boundary walk.
RangeSet pair_runs(std::vector<HilbertIndex>& starts,
                   std::vector<HilbertIndex>& ends) {
  assert(starts.size() == ends.size());
  std::sort(starts.begin(), starts.end());
  std::sort(ends.begin(), ends.end());
  std::vector<HilbertRange> raw;
  raw.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    raw.push_back(HilbertRange{starts[i], ends[i]});
  }
  return normalize_ranges(std::move(raw));
}

// Decomposes [start, end] into maximal curve-aligned quads (blocks of 4^m
// indices starting at a multiple of 4^m).  Each quad's cells form an axis-
// aligned 2^m square, so one decode pins down the whole block.
template <typename Fn>
void for_each_quad(HilbertRange r, Fn&& fn) {
  HilbertIndex n = r.start;
  for (;;) {
    int m = 0;
    // Largest aligned quad that starts at n and stays within the range.
    while (m < 31) {
      std::uint64_t size = std::uint64_t{1} << (2 * (m + 1));
      if (n % size != 0 || size - 1 > r.end - n) break;
      ++m;
    }
    std::uint64_t size = std::uint64_t{1} << (2 * m);
    fn(n, m);
    if (r.end - n < size) return;  // quad reached the end of the range
    n += size;
  }
}

}  // namespace

RangeSet mask_to_ranges(const RasterMask& mask) {
  const GridGeometry& grid = mask.grid();
  const std::uint32_t last = grid.side() - 1;
  const HilbertIndex top = grid.cell_count() - 1;
  std::vector<HilbertIndex> starts, ends;
  mask.for_each_set([&](std::uint32_t x, std::uint32_t y) {
    // A run boundary needs a curve neighbor outside the region, and curve
    // neighbors are always grid 4-neighbors; cells buried inside the region
    // (all four neighbors set) can be skipped without encoding them.
    if (x > 0 && y > 0 && x < last && y < last && mask.test(x - 1, y) &&
        mask.test(x + 1, y) && mask.test(x, y - 1) && mask.test(x, y + 1)) {
      return;
    }
    HilbertIndex n = hilbert_encode(grid, Cell{x, y});
    if (n == 0) {
      starts.push_back(n);
    } else {
      Cell prev = hilbert_decode(grid, n - 1);
      if (!mask.test(prev.x, prev.y)) starts.push_back(n);
    }
    if (n == top) {
      ends.push_back(n);
    } else {
      Cell next = hilbert_decode(grid, n + 1);
      if (!mask.test(next.x, next.y)) ends.push_back(n);
    }
  });
  return pair_runs(starts, ends);
}

RasterMask ranges_to_mask(const RangeSet& ranges, const GridGeometry& grid) {
  const HilbertIndex count = grid.cell_count();
  for (const HilbertRange& r : ranges) {
    if (r.end >= count) {
      throw RangeError("range end " + std::to_string(r.end) +
                       " outside order-" + std::to_string(grid.order()) +
                       " grid (cell count " + std::to_string(count) + ")");
    }
  }
  if (ranges.empty()) {
    return RasterMask(grid, CellRect{0, 0, 0, 0});
  }
  CellRect box{grid.side() - 1, grid.side() - 1, 0, 0};
  for (const HilbertRange& r : ranges) {
    for_each_quad(r, [&](HilbertIndex base, int m) {
      Cell c = hilbert_decode(grid, base);
      std::uint32_t sz = std::uint32_t{1} << m;
      std::uint32_t x0 = c.x & ~(sz - 1), y0 = c.y & ~(sz - 1);
      box.min_x = std::min(box.min_x, x0);
      box.min_y = std::min(box.min_y, y0);
      box.max_x = std::max(box.max_x, x0 + sz - 1);
      box.max_y = std::max(box.max_y, y0 + sz - 1);
    });
  }
  RasterMask mask(grid, box);
  for (const HilbertRange& r : ranges) {
    for_each_quad(r, [&](HilbertIndex base, int m) {
      Cell c = hilbert_decode(grid, base);
      std::uint32_t sz = std::uint32_t{1} << m;
      std::uint32_t x0 = c.x & ~(sz - 1), y0 = c.y & ~(sz - 1);
      for (std::uint32_t y = y0; y < y0 + sz; ++y) {
        mask.set_row_span(y, x0, x0 + sz - 1);
      }
    });
  }
  return mask;
}

std::optional<CellRect> window_to_cells(const QueryWindow& window,
                                        const GridGeometry& grid,
                                        std::uint32_t cell_size) {
  if (cell_size < 1) throw ArgumentError("cell size must be at least 1");
  if (window.min_x > window.max_x || window.min_y > window.max_y) {
    throw ArgumentError("window has min > max");
  }
  const std::int64_t c = cell_size;
  const std::int64_t side = grid.side();
  auto cell_floor = [c](std::int64_t v) {
    return v >= 0 ? v / c : -((-v + c - 1) / c);
  };
  std::int64_t x0 = cell_floor(window.min_x), x1 = cell_floor(window.max_x);
  std::int64_t y0 = cell_floor(window.min_y), y1 = cell_floor(window.max_y);
  if (x1 < 0 || y1 < 0 || x0 >= side || y0 >= side) return std::nullopt;
  return CellRect{static_cast<std::uint32_t>(std::max<std::int64_t>(x0, 0)),
                  static_cast<std::uint32_t>(std::max<std::int64_t>(y0, 0)),
                  static_cast<std::uint32_t>(std::min(x1, side - 1)),
                  static_cast<std::uint32_t>(std::min(y1, side - 1))};
}

RangeSet rect_to_ranges(const QueryWindow& window, const GridGeometry& grid,
                        std::uint32_t cell_size) {
  std::optional<CellRect> rect = window_to_cells(window, grid, cell_size);
  if (!rect) return RangeSet{};
  const HilbertIndex top = grid.cell_count() - 1;
  auto inside = [&](Cell c) { return rect->contains(c); };
  std::vector<HilbertIndex> starts, ends;
  auto visit = [&](std::uint32_t x, std::uint32_t y) {
    HilbertIndex n = hilbert_encode(grid, Cell{x, y});
    if (n == 0 || !inside(hilbert_decode(grid, n - 1))) starts.push_back(n);
    if (n == top || !inside(hilbert_decode(grid, n + 1))) ends.push_back(n);
  };
  // Only the rectangle perimeter can border a run boundary (same argument
  // as in mask_to_ranges, with O(1) membership instead of a bitmap).
  for (std::uint32_t x = rect->min_x; x <= rect->max_x; ++x) {
    visit(x, rect->min_y);
    if (rect->max_y != rect->min_y) visit(x, rect->max_y);
  }
  if (rect->height() > 2) {
    for (std::uint32_t y = rect->min_y + 1; y < rect->max_y; ++y) {
      visit(rect->min_x, y);
      if (rect->max_x != rect->min_x) visit(rect->max_x, y);
    }
  }
  return pair_runs(starts, ends);
}

}  // namespace hroi
