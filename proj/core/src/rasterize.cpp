#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hroi/error.hpp"
#include "hroi/hilbert.hpp"
#include "hroi/region_codec.hpp"

namespace hroi {
namespace {

using i64 = std::int64_t;
using i128 = __int128;

// All geometry runs on a doubled integer lattice: pixel coordinate v maps to
// U = 2*v - (cell_size - 1), putting the center of cell i at U = 2*s*i and
// its open square at (s*(2i-1), s*(2i+1)).  Half-pixel inputs stay integral,
// so every predicate below is exact.

struct LatticePoint {
  i64 x = 0;
  i64 y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct Frame {
  i64 s;        // cell_size
  i64 lo, hi;   // legal U range per axis: [-s, (2*side - 1) * s]
  std::uint32_t side;
};

Frame make_frame(const GridGeometry& grid, std::uint32_t cell_size) {
  if (cell_size < 1) throw ArgumentError("cell size must be at least 1");
  // Exactness relies on coordinate-difference products fitting __int128;
  // cap the footprint so they always do, with a wide margin.
  if (static_cast<unsigned __int128>(cell_size) * grid.side() >
      (std::uint64_t{1} << 59)) {
    throw CapacityError("grid footprint too large for exact rasterization");
  }
  i64 s = cell_size;
  return Frame{s, -s, (2 * static_cast<i64>(grid.side()) - 1) * s,
               grid.side()};
}

i64 floor_div(i128 a, i128 b) {
  assert(b > 0);
  i128 q = a / b;
  if (a % b != 0 && a < 0) --q;
  return static_cast<i64>(q);
}

// Lattice lines (cell-square borders) sit at odd multiples of s.
bool on_line(i64 u, i64 s) {
  return u % s == 0 && ((u / s) & 1);
}

// Cell index whose open square strictly contains u; caller guarantees
// !on_line(u, s).
i64 strict_cell(i64 u, i64 s) {
  return floor_div(u + s, 2 * s);
}

// First cell entered when leaving u in direction dir (dir != 0 whenever u
// lies on a lattice line).
i64 start_cell(i64 u, i64 s, int dir) {
  if (!on_line(u, s)) return strict_cell(u, s);
  i64 m = (u / s - 1) / 2;  // border between cells m and m+1
  return dir > 0 ? m + 1 : m;
}

// Smallest / largest cell whose open square reaches past u on either side;
// together they bound every cell a shape with U extent [umin, umax] can set.
i64 cover_lo(i64 u, i64 s) { return floor_div(static_cast<i128>(u) - s, 2 * s) + 1; }
i64 cover_hi(i64 u, i64 s) { return floor_div(static_cast<i128>(u) + s - 1, 2 * s); }

// Visits every cell whose open square the closed segment a-b passes
// through.  Segments riding exactly on a lattice line touch no open square
// and emit nothing; crossing a lattice corner steps diagonally without
// touching the two side cells.
template <typename Emit>
void supercover(LatticePoint a, LatticePoint b, i64 s, Emit&& emit) {
  i64 dx = b.x - a.x, dy = b.y - a.y;
  if (dx == 0 && dy == 0) {
    if (!on_line(a.x, s) && !on_line(a.y, s)) {
      emit(strict_cell(a.x, s), strict_cell(a.y, s));
    }
    return;
  }
  if ((dx == 0 && on_line(a.x, s)) || (dy == 0 && on_line(a.y, s))) return;

  int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  i64 ci = start_cell(a.x, s, sx);
  i64 cj = start_cell(a.y, s, sy);
  emit(ci, cj);

  // Next lattice line ahead per axis, stepped by 2s as the walk advances.
  i64 vx = s * (2 * ci + sx);
  i64 vy = s * (2 * cj + sy);
  for (;;) {
    // A crossing participates only while strictly before the endpoint; a
    // crossing exactly at the endpoint leaves no open interval behind it.
    bool pend_x = sx != 0 && (sx > 0 ? vx < b.x : vx > b.x);
    bool pend_y = sy != 0 && (sy > 0 ? vy < b.y : vy > b.y);
    if (!pend_x && !pend_y) return;
    int step;  // -1 vertical line first, +1 horizontal first, 0 corner
    if (!pend_y) {
      step = -1;
    } else if (!pend_x) {
      step = 1;
    } else {
      // Compare crossing parameters (vx-ax)/dx vs (vy-ay)/dy exactly.
      i128 lhs = static_cast<i128>((vx - a.x) * sx) * (dy * sy);
      i128 rhs = static_cast<i128>((vy - a.y) * sy) * (dx * sx);
      step = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
    if (step <= 0) {
      ci += sx;
      vx += 2 * s * sx;
    }
    if (step >= 0) {
      cj += sy;
      vy += 2 * s * sy;
    }
    emit(ci, cj);
  }
}

// ---- polygon preparation -------------------------------------------------

using LatticeRing = std::vector<LatticePoint>;

i64 to_lattice(double v, const Frame& f, const char* axis) {
  double doubled = 2.0 * v;
  if (!(doubled >= -4.6e18 && doubled <= 4.6e18) ||
      doubled != std::nearbyint(doubled)) {
    throw GeometryError("vertex " + std::string(axis) + "=" +
                        std::to_string(v) +
                        " is not on the half-pixel lattice");
  }
  i64 u = static_cast<i64>(doubled) - (f.s - 1);
  if (u < f.lo || u > f.hi) {
    throw BoundsError("vertex " + std::string(axis) + "=" + std::to_string(v) +
                      " outside the grid footprint");
  }
  return u;
}

LatticeRing prepare_ring(const Ring& ring, const Frame& f) {
  LatticeRing out;
  out.reserve(ring.size());
  for (const Vertex& v : ring) {
    LatticePoint p{to_lattice(v.x, f, "x"), to_lattice(v.y, f, "y")};
    if (out.empty() || !(p == out.back())) out.push_back(p);
  }
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  std::vector<LatticePoint> distinct = out;
  std::sort(distinct.begin(), distinct.end(),
            [](const LatticePoint& a, const LatticePoint& b) {
              return a.x != b.x ? a.x < b.x : a.y < b.y;
            });
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (distinct.size() < 3) {
    throw GeometryError("ring needs at least 3 distinct vertices");
  }
  return out;
}

// ---- even-odd scanline ---------------------------------------------------

struct Edge {
  LatticePoint p, q;
  i64 ymin, ymax;
};

// Exact crossing abscissa num/den (den > 0) of an edge with scanline V.
struct Crossing {
  i128 num;
  i64 den;
};

bool crossing_less(const Crossing& a, const Crossing& b) {
  i64 qa = floor_div(a.num, a.den);
  i64 qb = floor_div(b.num, b.den);
  if (qa != qb) return qa < qb;
  i128 ra = a.num - static_cast<i128>(qa) * a.den;
  i128 rb = b.num - static_cast<i128>(qb) * b.den;
  return ra * b.den < rb * a.den;
}

// Sets every cell of `mask` whose center lies strictly inside the even-odd
// interior of the edge set, sweeping one scanline per window row.
void fill_interior(const std::vector<Edge>& edges, const Frame& f,
                   RasterMask& mask) {
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(),
            [](const Edge& a, const Edge& b) { return a.ymin < b.ymin; });
  std::vector<const Edge*> active;
  std::vector<Crossing> crossings;
  std::size_t next = 0;
  const CellRect& w = mask.window();
  for (std::uint32_t j = w.min_y; j <= w.max_y; ++j) {
    i64 v = 2 * f.s * static_cast<i64>(j);  // scanline through cell centers
    while (next < sorted.size() && sorted[next].ymin <= v) {
      active.push_back(&sorted[next++]);
    }
    std::erase_if(active, [v](const Edge* e) { return e->ymax <= v; });
    crossings.clear();
    for (const Edge* e : active) {
      // Active edges satisfy ymin <= v < ymax, the half-open rule that
      // counts shared vertices exactly once and skips horizontal edges.
      i64 den = e->q.y - e->p.y;
      i128 num = static_cast<i128>(e->p.x) * den +
                 static_cast<i128>(e->q.x - e->p.x) * (v - e->p.y);
      if (den < 0) {
        den = -den;
        num = -num;
      }
      crossings.push_back(Crossing{num, den});
    }
    assert(crossings.size() % 2 == 0);
    std::sort(crossings.begin(), crossings.end(), crossing_less);
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Centers strictly between the two crossings: 2*s*i in (a, b).
      const Crossing& a = crossings[k];
      const Crossing& b = crossings[k + 1];
      i64 first = floor_div(a.num, static_cast<i128>(2) * f.s * a.den) + 1;
      i64 last = floor_div(b.num - 1, static_cast<i128>(2) * f.s * b.den);
      if (first < w.min_x) first = w.min_x;
      if (last > w.max_x) last = w.max_x;
      if (first <= last) {
        mask.set_row_span(j, static_cast<std::uint32_t>(first),
                          static_cast<std::uint32_t>(last));
      }
    }
  }
}

}  // namespace

RasterMask rasterize_polygon(const PolygonGeom& polygon,
                             const GridGeometry& grid,
                             std::uint32_t cell_size) {
  Frame frame = make_frame(grid, cell_size);
  std::vector<LatticeRing> rings;
  rings.push_back(prepare_ring(polygon.outer, frame));
  for (const Ring& hole : polygon.holes) {
    rings.push_back(prepare_ring(hole, frame));
  }

  i64 min_x = frame.hi, max_x = frame.lo;
  i64 min_y = frame.hi, max_y = frame.lo;
  for (const LatticeRing& ring : rings) {
    for (const LatticePoint& p : ring) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }
  i64 wx0 = cover_lo(min_x, frame.s), wx1 = cover_hi(max_x, frame.s);
  i64 wy0 = cover_lo(min_y, frame.s), wy1 = cover_hi(max_y, frame.s);
  // A ring collapsed onto a lattice line covers nothing; keep the window
  // well-formed (and inside the grid, for slivers on the outer rim) and let
  // it stay empty.
  if (wx1 < wx0) wx1 = wx0;
  if (wy1 < wy0) wy1 = wy0;
  i64 last = static_cast<i64>(grid.side()) - 1;
  wx0 = std::min(wx0, last);
  wx1 = std::min(wx1, last);
  wy0 = std::min(wy0, last);
  wy1 = std::min(wy1, last);
  RasterMask mask(grid,
                  CellRect{static_cast<std::uint32_t>(wx0),
                           static_cast<std::uint32_t>(wy0),
                           static_cast<std::uint32_t>(wx1),
                           static_cast<std::uint32_t>(wy1)});

  std::vector<Edge> edges;
  for (const LatticeRing& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      LatticePoint p = ring[i];
      LatticePoint q = ring[(i + 1) % ring.size()];
      if (p.y != q.y) {
        edges.push_back(Edge{p, q, std::min(p.y, q.y), std::max(p.y, q.y)});
      }
    }
  }
  fill_interior(edges, frame, mask);

  for (const LatticeRing& ring : rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      supercover(ring[i], ring[(i + 1) % ring.size()], frame.s,
                 [&](i64 cx, i64 cy) {
                   mask.set(static_cast<std::uint32_t>(cx),
                            static_cast<std::uint32_t>(cy));
                 });
    }
  }
  return mask;
}

RangeSet encode_point(PixelPoint point, const GridGeometry& grid,
                      std::uint32_t cell_size) {
  Frame frame = make_frame(grid, cell_size);
  i64 extent = frame.s * static_cast<i64>(grid.side());
  if (point.x < 0 || point.y < 0 || point.x >= extent || point.y >= extent) {
    throw BoundsError("point (" + std::to_string(point.x) + ", " +
                      std::to_string(point.y) +
                      ") outside the grid footprint");
  }
  Cell cell{static_cast<std::uint32_t>(point.x / frame.s),
            static_cast<std::uint32_t>(point.y / frame.s)};
  HilbertIndex n = hilbert_encode(grid, cell);
  return normalize_ranges({HilbertRange{n, n}});
}

RangeSet encode_polyline(const std::vector<PixelPoint>& points,
                         const GridGeometry& grid, std::uint32_t cell_size) {
  Frame frame = make_frame(grid, cell_size);
  if (points.size() < 2) {
    throw ArgumentError("polyline needs at least 2 points");
  }
  i64 extent = frame.s * static_cast<i64>(grid.side());
  std::vector<LatticePoint> path;
  path.reserve(points.size());
  for (const PixelPoint& p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= extent || p.y >= extent) {
      throw BoundsError("point (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) +
                        ") outside the grid footprint");
    }
    path.push_back(LatticePoint{2 * p.x - (frame.s - 1),
                                2 * p.y - (frame.s - 1)});
  }
  std::vector<Cell> cells;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    supercover(path[i], path[i + 1], frame.s, [&](i64 cx, i64 cy) {
      cells.push_back(Cell{static_cast<std::uint32_t>(cx),
                           static_cast<std::uint32_t>(cy)});
    });
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<HilbertRange> raw;
  raw.reserve(cells.size());
  for (Cell c : cells) {
    HilbertIndex n = hilbert_encode(grid, c);
    raw.push_back(HilbertRange{n, n});
  }
  return normalize_ranges(std::move(raw));
}

}  // namespace hroi
