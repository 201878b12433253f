#include <bit>
#include <cassert>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hroi/error.hpp"
#include "hroi/region_codec.hpp"

namespace hroi {
namespace {

using i64 = std::int64_t;
using i128 = __int128;

// Corner lattice: corner (a, b) is the top-left corner of cell (a, b), i.e.
// geometric point (a - 1/2, b - 1/2); a and b run 0..side.  Boundary edges
// are unit steps between corners, directed so the set region stays on the
// walker's right (y grows downward): outer rings come out clockwise on
// screen, hole rings counterclockwise.
enum Dir : int { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3 };

constexpr int kStepX[4] = {1, 0, -1, 0};
constexpr int kStepY[4] = {0, 1, 0, -1};

struct CornerPoint {
  i64 a = 0;
  i64 b = 0;

  friend bool operator==(const CornerPoint&, const CornerPoint&) = default;
};

struct TracedLoop {
  std::vector<CornerPoint> verts;  // direction changes only, cyclic order
  i128 area2 = 0;                  // doubled signed area; > 0 for outers
  CornerPoint probe;               // start corner of some east edge
};

class EdgeWalker {
 public:
  explicit EdgeWalker(const RasterMask& mask)
      : mask_(mask), side_(mask.grid().side()) {}

  void build_edges() {
    mask_.for_each_set([&](std::uint32_t x, std::uint32_t y) {
      if (unset(x, static_cast<i64>(y) - 1)) add(x, y, kEast);
      if (unset(static_cast<i64>(x) + 1, y)) add(x + 1, y, kSouth);
      if (unset(x, static_cast<i64>(y) + 1)) add(x + 1, y + 1, kWest);
      if (unset(static_cast<i64>(x) - 1, y)) add(x, y + 1, kNorth);
    });
  }

  std::vector<TracedLoop> walk_loops() {
    std::vector<TracedLoop> loops;
    for (const auto& [key, dir] : order_) {
      if (used_[key] & (1 << dir)) continue;  // swept up by an earlier loop
      loops.push_back(walk(key, dir));
    }
    return loops;
  }

 private:
  // Cells outside the grid count as unset, matching the mask semantics.
  bool unset(i64 x, i64 y) const {
    if (x < 0 || y < 0 || x >= side_ || y >= side_) return true;
    return !mask_.test(static_cast<std::uint32_t>(x),
                       static_cast<std::uint32_t>(y));
  }

  std::uint64_t key_of(i64 a, i64 b) const {
    return static_cast<std::uint64_t>(a) * (side_ + 1) +
           static_cast<std::uint64_t>(b);
  }
  CornerPoint corner_of(std::uint64_t key) const {
    return CornerPoint{static_cast<i64>(key / (side_ + 1)),
                       static_cast<i64>(key % (side_ + 1))};
  }

  void add(i64 a, i64 b, Dir dir) {
    std::uint64_t key = key_of(a, b);
    out_[key] |= 1 << dir;
    order_.emplace_back(key, dir);
  }

  TracedLoop walk(std::uint64_t start_key, int start_dir) {
    std::vector<CornerPoint> corners;
    std::vector<int> dirs;
    std::uint64_t key = start_key;
    int dir = start_dir;
    do {
      used_[key] |= 1 << dir;
      CornerPoint c = corner_of(key);
      corners.push_back(c);
      dirs.push_back(dir);
      key = key_of(c.a + kStepX[dir], c.b + kStepY[dir]);
      // The successor of an edge depends only on the corner's original
      // topology, never on what other walks consumed: a corner with two
      // departures is a checkerboard pinch, where the sharp right turn
      // keeps each ring simple and hugging its own cells.
      int avail = out_.at(key);
      int right = (dir + 1) & 3;
      dir = (avail & (1 << right))
                ? right
                : std::countr_zero(static_cast<unsigned>(avail));
      assert(avail & (1 << dir));
    } while (!(key == start_key && dir == start_dir));

    TracedLoop loop;
    bool probe_found = false;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      std::size_t prev = (i + corners.size() - 1) % corners.size();
      if (dirs[prev] != dirs[i]) loop.verts.push_back(corners[i]);
      if (!probe_found && dirs[i] == kEast) {
        loop.probe = corners[i];
        probe_found = true;
      }
    }
    for (std::size_t i = 0; i < loop.verts.size(); ++i) {
      const CornerPoint& p = loop.verts[i];
      const CornerPoint& q = loop.verts[(i + 1) % loop.verts.size()];
      loop.area2 += static_cast<i128>(p.a) * q.b - static_cast<i128>(q.a) * p.b;
    }
    assert(probe_found);
    return loop;
  }

  const RasterMask& mask_;
  i64 side_;
  std::unordered_map<std::uint64_t, int> out_;   // departure dirs per corner
  std::unordered_map<std::uint64_t, int> used_;  // already part of a loop
  std::vector<std::pair<std::uint64_t, int>> order_;
};

// Even-odd test of cell center (cx, cy) against a traced ring.  Doubling the
// coordinates makes ring corners odd and the probe even, so the probe is
// never on an edge and all comparisons are strict.
bool center_inside(i64 cx, i64 cy, const std::vector<CornerPoint>& ring) {
  i64 tx = 2 * cx, ty = 2 * cy;
  bool inside = false;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const CornerPoint& p = ring[i];
    const CornerPoint& q = ring[(i + 1) % ring.size()];
    i64 py = 2 * p.b - 1, qy = 2 * q.b - 1;
    if (py == qy) continue;
    if (!((py <= ty && ty < qy) || (qy <= ty && ty < py))) continue;
    i64 px = 2 * p.a - 1, qx = 2 * q.a - 1;
    // Crossing strictly right of the probe: sign of (X - tx) * (qy - py).
    i128 num = static_cast<i128>(px - tx) * (qy - py) +
               static_cast<i128>(qx - px) * (ty - py);
    if ((qy > py) ? (num > 0) : (num < 0)) inside = !inside;
  }
  return inside;
}

Ring to_ring(const std::vector<CornerPoint>& verts) {
  Ring ring;
  ring.reserve(verts.size());
  for (const CornerPoint& c : verts) {
    ring.push_back(Vertex{static_cast<double>(c.a) - 0.5,
                          static_cast<double>(c.b) - 0.5});
  }
  return ring;
}

}  // namespace

std::vector<PolygonGeom> ranges_to_polygon(const RangeSet& ranges,
                                           const GridGeometry& grid) {
  RasterMask mask = ranges_to_mask(ranges, grid);
  if (mask.set_count() == 0) return {};

  EdgeWalker walker(mask);
  walker.build_edges();
  std::vector<TracedLoop> loops = walker.walk_loops();

  std::vector<const TracedLoop*> outers;
  std::vector<const TracedLoop*> holes;
  for (const TracedLoop& loop : loops) {
    (loop.area2 > 0 ? outers : holes).push_back(&loop);
  }

  std::vector<PolygonGeom> polygons;
  polygons.reserve(outers.size());
  std::vector<std::size_t> loop_of_outer;
  for (const TracedLoop* o : outers) {
    polygons.push_back(PolygonGeom{to_ring(o->verts), {}});
  }
  for (const TracedLoop* h : holes) {
    // The cell just above the probe's east edge lies inside the hole; the
    // smallest outer ring containing it is the hole's component.
    i64 cx = h->probe.a, cy = h->probe.b - 1;
    std::size_t best = outers.size();
    i128 best_area = 0;
    for (std::size_t i = 0; i < outers.size(); ++i) {
      if (center_inside(cx, cy, outers[i]->verts) &&
          (best == outers.size() || outers[i]->area2 < best_area)) {
        best = i;
        best_area = outers[i]->area2;
      }
    }
    if (best == outers.size()) {
      throw GeometryError("hole ring without an enclosing outer ring");
    }
    polygons[best].holes.push_back(to_ring(h->verts));
  }
  return polygons;
}

}  // namespace hroi
