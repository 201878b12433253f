#include "oracles.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>

namespace oracle {

namespace {

using hroi::Cell;
using hroi::GridGeometry;
using hroi::HilbertRange;
using hroi::PolygonGeom;
using hroi::Ring;

struct Turtle {
  std::vector<Cell> cells;
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t hx = 1;  // heading, starts +x
  std::int64_t hy = 0;

  void left() {
    auto nx = -hy, ny = hx;
    hx = nx;
    hy = ny;
  }
  void right() {
    auto nx = hy, ny = -hx;
    hx = nx;
    hy = ny;
  }
  void forward() {
    x += hx;
    y += hy;
    cells.push_back(Cell{static_cast<std::uint32_t>(x),
                         static_cast<std::uint32_t>(y)});
  }
};

void walk_b(int depth, Turtle& t);

// A -> + B F - A F A - F B +
void walk_a(int depth, Turtle& t) {
  if (depth == 0) return;
  t.left();
  walk_b(depth - 1, t);
  t.forward();
  t.right();
  walk_a(depth - 1, t);
  t.forward();
  walk_a(depth - 1, t);
  t.right();
  t.forward();
  walk_b(depth - 1, t);
  t.left();
}

// B -> - A F + B F B + F A -
void walk_b(int depth, Turtle& t) {
  if (depth == 0) return;
  t.right();
  walk_a(depth - 1, t);
  t.forward();
  t.left();
  walk_b(depth - 1, t);
  t.forward();
  walk_b(depth - 1, t);
  t.left();
  t.forward();
  walk_a(depth - 1, t);
  t.right();
}

struct Pt {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

// Doubled pixel coordinates: 2*v, exact for half-integer vertices.
Pt doubled(const hroi::Vertex& v) {
  double dx = 2 * v.x;
  double dy = 2 * v.y;
  assert(dx == std::nearbyint(dx) && dy == std::nearbyint(dy));
  return Pt{static_cast<std::int64_t>(std::llround(dx)),
            static_cast<std::int64_t>(std::llround(dy))};
}

std::vector<std::pair<Pt, Pt>> ring_edges(const Ring& ring) {
  std::vector<std::pair<Pt, Pt>> edges;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Pt a = doubled(ring[i]);
    Pt b = doubled(ring[(i + 1) % ring.size()]);
    if (a.x != b.x || a.y != b.y) edges.emplace_back(a, b);
  }
  return edges;
}

// Closed segment a..b against the open axis box (lo, hi) per axis:
// Liang-Barsky with exact rational comparisons.  The parameter interval
// starts closed [0, 1] and every clip is strict because the box is open.
bool segment_meets_open_box(Pt a, Pt b, Pt lo, Pt hi) {
  __int128 t_lo_num = 0, t_hi_num = 1;  // as fractions num/den
  __int128 t_lo_den = 1, t_hi_den = 1;
  auto clip = [&](std::int64_t d, std::int64_t a0, std::int64_t lo0,
                  std::int64_t hi0) -> bool {
    if (d == 0) return lo0 < a0 && a0 < hi0;
    // Crossing parameters (lo0-a0)/d and (hi0-a0)/d; for d < 0 the hi
    // boundary is crossed first, so normalizing the sign must also swap
    // the pair to keep (n1/den, n2/den) the increasing open window.
    __int128 n1 = lo0 - a0, n2 = hi0 - a0;
    __int128 den = d;
    if (den < 0) {
      __int128 tmp = n1;
      n1 = -n2;
      n2 = -tmp;
      den = -den;
    }
    // Now the open parameter window is (n1/den, n2/den).
    // t_lo = max(t_lo, n1/den): compare t_lo_num/t_lo_den vs n1/den.
    if (t_lo_num * den < n1 * t_lo_den) {
      t_lo_num = n1;
      t_lo_den = den;
    }
    if (t_hi_num * den > n2 * t_hi_den) {
      t_hi_num = n2;
      t_hi_den = den;
    }
    return true;
  };
  if (!clip(b.x - a.x, a.x, lo.x, hi.x)) return false;
  if (!clip(b.y - a.y, a.y, lo.y, hi.y)) return false;
  // Each clipped bound is open, the original [0,1] closed; the window is
  // nonempty iff t_lo < t_hi strictly (equality would pin the segment to
  // the box boundary, which the open box excludes).
  return t_lo_num * t_hi_den < t_hi_num * t_lo_den;
}

// Even-odd membership of point p over every ring edge, by +x ray cast.
// Callers guarantee p is not on any edge (the box test fires first).
bool center_inside(Pt p, const std::vector<std::pair<Pt, Pt>>& edges) {
  bool inside = false;
  for (const auto& [a, b] : edges) {
    bool straddles = (a.y > p.y) != (b.y > p.y);
    if (!straddles) continue;
    // Crossing x beyond p.x iff (a.x-p.x) + (p.y-a.y)*(b.x-a.x)/(b.y-a.y)
    // > 0; multiply through by (b.y-a.y) with its sign.
    __int128 num = static_cast<__int128>(a.x - p.x) * (b.y - a.y) +
                   static_cast<__int128>(p.y - a.y) * (b.x - a.x);
    if ((b.y - a.y > 0) ? num > 0 : num < 0) inside = !inside;
  }
  return inside;
}

}  // namespace

std::vector<Cell> curve_walk(int order) {
  Turtle t;
  t.cells.reserve(std::size_t{1} << (2 * order));
  t.cells.push_back(Cell{0, 0});
  walk_a(order, t);
  assert(t.cells.size() == (std::size_t{1} << (2 * order)));
  return t.cells;
}

std::vector<std::uint64_t> curve_positions(int order) {
  std::vector<Cell> walk = curve_walk(order);
  std::uint32_t side = std::uint32_t{1} << order;
  std::vector<std::uint64_t> position(walk.size());
  for (std::size_t i = 0; i < walk.size(); ++i) {
    position[std::uint64_t{walk[i].y} * side + walk[i].x] = i;
  }
  return position;
}

std::set<Cell> rasterize_cells(const PolygonGeom& polygon,
                               const GridGeometry& grid,
                               std::uint32_t cell_size) {
  std::vector<std::pair<Pt, Pt>> edges = ring_edges(polygon.outer);
  for (const Ring& hole : polygon.holes) {
    auto hole_edges = ring_edges(hole);
    edges.insert(edges.end(), hole_edges.begin(), hole_edges.end());
  }
  std::set<Cell> cells;
  const std::int64_t s = cell_size;
  for (std::uint32_t j = 0; j < grid.side(); ++j) {
    for (std::uint32_t i = 0; i < grid.side(); ++i) {
      // Cell (i,j) covers pixels [i*s, (i+1)*s - 1]; in doubled pixel
      // coordinates its center is (2*i*s + s - 1, ...) and its open
      // square spans (2*i*s - 1, 2*i*s + 2*s - 1).
      const std::int64_t cx = 2 * static_cast<std::int64_t>(i) * s;
      const std::int64_t cy = 2 * static_cast<std::int64_t>(j) * s;
      Pt lo{cx - 1, cy - 1};
      Pt hi{cx + 2 * s - 1, cy + 2 * s - 1};
      Pt center{cx + s - 1, cy + s - 1};
      bool set = false;
      for (const auto& [a, b] : edges) {
        if (segment_meets_open_box(a, b, lo, hi)) {
          set = true;
          break;
        }
      }
      if (!set) set = center_inside(center, edges);
      if (set) cells.insert(Cell{i, j});
    }
  }
  return cells;
}

std::vector<HilbertRange> runs_on_walk(const std::set<Cell>& cells,
                                       int order) {
  std::vector<Cell> walk = curve_walk(order);
  std::vector<HilbertRange> runs;
  bool in_run = false;
  for (std::size_t i = 0; i < walk.size(); ++i) {
    bool member = cells.count(walk[i]) > 0;
    if (member && !in_run) {
      runs.push_back(HilbertRange{i, i});
      in_run = true;
    } else if (member) {
      runs.back().end = i;
    } else {
      in_run = false;
    }
  }
  return runs;
}

std::set<Cell> cells_of_ranges(const std::vector<HilbertRange>& ranges,
                               int order) {
  std::vector<Cell> walk = curve_walk(order);
  std::set<Cell> cells;
  for (const HilbertRange& r : ranges) {
    for (std::uint64_t i = r.start; i <= r.end; ++i) cells.insert(walk[i]);
  }
  return cells;
}

bool ranges_intersect(const std::vector<HilbertRange>& a,
                      const std::vector<HilbertRange>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].end < b[j].start) {
      ++i;
    } else if (b[j].end < a[i].start) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace oracle
