#include "hroi/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <thread>
#include <utility>

#include <json.hpp>

#include "hroi/error.hpp"
#include "hroi/region_codec.hpp"

namespace hroi {
namespace {

// mt19937_64 output is pinned by the standard; the draw helpers below avoid
// std::uniform_*_distribution, whose mapping is implementation-defined, so
// corpora reproduce bit for bit across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bounded(std::uint64_t n) { return eng_() % n; }

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

Ring make_blob(Rng& rng, const CorpusSpec& spec) {
  const std::uint64_t w = spec.image_width, h = spec.image_height;
  const std::uint64_t cx =
      spec.max_radius + rng.bounded(w - 2 * std::uint64_t{spec.max_radius});
  const std::uint64_t cy =
      spec.max_radius + rng.bounded(h - 2 * std::uint64_t{spec.max_radius});
  const std::uint32_t m =
      spec.min_vertices +
      static_cast<std::uint32_t>(
          rng.bounded(spec.max_vertices - spec.min_vertices + 1));
  Ring ring;
  ring.reserve(m);
  for (std::uint32_t j = 0; j < m; ++j) {
    // Jitter below half a slot keeps the angles strictly increasing, so the
    // blob stays star-shaped (simple) by construction.
    double angle = 2.0 * std::numbers::pi *
                   (j + 0.45 * (2.0 * rng.unit() - 1.0)) / m;
    double radius =
        spec.min_radius + rng.unit() * (spec.max_radius - spec.min_radius);
    double x = static_cast<double>(cx) + radius * std::cos(angle);
    double y = static_cast<double>(cy) + radius * std::sin(angle);
    Vertex v{std::nearbyint(x), std::nearbyint(y)};
    if (ring.empty() || !(v == ring.back())) ring.push_back(v);
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

double per_polygon(std::uint64_t total, std::uint64_t count) {
  return count == 0 ? 0.0
                    : static_cast<double>(total) / static_cast<double>(count);
}

// Rounding can collapse a tiny blob's vertices onto each other; such rings
// would be rejected by the rasterizer, so the generator redraws them.
bool viable_ring(const Ring& ring) {
  if (ring.size() < 3) return false;
  Ring sorted = ring;
  std::sort(sorted.begin(), sorted.end(),
            [](const Vertex& a, const Vertex& b) {
              return a.x != b.x ? a.x < b.x : a.y < b.y;
            });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted.size() >= 3;
}

}  // namespace

SynthCorpus synth_corpus(const CorpusSpec& spec, std::uint32_t cell_size) {
  if (spec.polygon_count < 1) {
    throw ArgumentError("polygon count must be at least 1");
  }
  if (spec.min_vertices < 3 || spec.min_vertices > spec.max_vertices) {
    throw ArgumentError("vertex bounds must satisfy 3 <= min <= max");
  }
  if (spec.min_radius < 1 || spec.min_radius > spec.max_radius) {
    throw ArgumentError("radius bounds must satisfy 1 <= min <= max");
  }
  if (2 * std::uint64_t{spec.max_radius} >=
      std::min(spec.image_width, spec.image_height)) {
    throw ArgumentError("blobs of radius " + std::to_string(spec.max_radius) +
                        " cannot fit a " + std::to_string(spec.image_width) +
                        "x" + std::to_string(spec.image_height) + " image");
  }
  SynthCorpus corpus;
  corpus.spec = spec;
  corpus.cell_size = cell_size;
  corpus.grid = order_for(spec.image_width, spec.image_height, cell_size);
  corpus.items.reserve(spec.polygon_count);
  Rng rng(spec.seed);
  for (std::uint32_t i = 0; i < spec.polygon_count; ++i) {
    Ring ring = make_blob(rng, spec);
    for (int attempt = 0; !viable_ring(ring) && attempt < 8; ++attempt) {
      ring = make_blob(rng, spec);
    }
    if (!viable_ring(ring)) {
      throw ArgumentError("generator parameters collapse every blob");
    }
    CorpusItem item;
    item.polygon = PolygonGeom{std::move(ring), {}};
    RasterMask mask = rasterize_polygon(item.polygon, corpus.grid, cell_size);
    item.ranges = mask_to_ranges(mask);
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

AnnotationCollection SynthCorpus::to_collection() const {
  static const char* kLabels[] = {"nuclear material", "tumor", "stroma",
                                  "lymphocyte"};
  AnnotationCollection col;
  col.grid = grid;
  col.cell_size = cell_size;
  col.width = spec.image_width;
  col.height = spec.image_height;
  col.records.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    col.records.push_back(AnnotationRecord{
        i, "poly-" + std::to_string(i), kLabels[i % 4], items[i].ranges});
  }
  return col;
}

CorpusStats stats_from_totals(std::uint64_t polygons, std::uint64_t vertices,
                              std::uint64_t ranges) {
  CorpusStats s;
  s.polygon_count = polygons;
  s.total_vertices = vertices;
  s.total_ranges = ranges;
  s.vertices_per_polygon = per_polygon(vertices, polygons);
  s.ranges_per_polygon = per_polygon(ranges, polygons);
  s.polygon_bytes = vertices * 2 * 4;  // (x, y) as 4-byte ints
  s.range_bytes = ranges * 2 * 8;      // (start, end) as 8-byte indexes
  return s;
}

CorpusStats compute_stats(const SynthCorpus& corpus) {
  std::uint64_t vertices = 0, ranges = 0;
  for (const CorpusItem& item : corpus.items) {
    vertices += item.polygon.outer.size();
    for (const Ring& hole : item.polygon.holes) vertices += hole.size();
    ranges += item.ranges.size();
  }
  return stats_from_totals(corpus.items.size(), vertices, ranges);
}

NaiveQueryOracle::NaiveQueryOracle(const SynthCorpus& corpus)
    : grid_(corpus.grid), cell_size_(corpus.cell_size) {
  masks_.reserve(corpus.items.size());
  for (const CorpusItem& item : corpus.items) {
    masks_.push_back(rasterize_polygon(item.polygon, grid_, cell_size_));
  }
}

std::vector<std::uint64_t> NaiveQueryOracle::query(
    const QueryWindow& window) const {
  std::vector<std::uint64_t> ids;
  std::optional<CellRect> rect = window_to_cells(window, grid_, cell_size_);
  if (!rect) return ids;
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    const CellRect& w = masks_[i].window();
    std::uint32_t x0 = std::max(rect->min_x, w.min_x);
    std::uint32_t x1 = std::min(rect->max_x, w.max_x);
    std::uint32_t y0 = std::max(rect->min_y, w.min_y);
    std::uint32_t y1 = std::min(rect->max_y, w.max_y);
    bool hit = false;
    for (std::uint32_t y = y0; !hit && y <= y1 && x0 <= x1; ++y) {
      for (std::uint32_t x = x0; x <= x1; ++x) {
        if (masks_[i].test(x, y)) {
          hit = true;
          break;
        }
      }
    }
    if (hit) ids.push_back(i);
  }
  return ids;
}

BenchReport run_bench(const SynthCorpus& corpus, const IndexTable& index,
                      const BenchConfig& config) {
  if (config.window_count < 1) {
    throw ArgumentError("bench needs at least one window");
  }
  if (config.threads < 1) {
    throw ArgumentError("bench needs at least one worker");
  }
  BenchReport report;
  report.spec = corpus.spec;
  report.cell_size = corpus.cell_size;
  report.config = config;
  report.table_entries = index.entries().size();
  report.annotations = index.annotation_count();

  // Windows are drawn up front from the bench seed so the workload (and
  // with it every non-timing number) is independent of the worker count.
  Rng rng(config.seed);
  std::vector<QueryWindow> windows;
  windows.reserve(config.window_count);
  const std::uint64_t iw = corpus.spec.image_width;
  const std::uint64_t ih = corpus.spec.image_height;
  for (std::uint32_t i = 0; i < config.window_count; ++i) {
    // Window extents between 1% and 25% of the image per axis.
    auto extent = [&](std::uint64_t dim) {
      double frac = 0.01 + rng.unit() * 0.24;
      std::uint64_t e = static_cast<std::uint64_t>(
          frac * static_cast<double>(dim));
      return std::max<std::uint64_t>(e, 1);
    };
    std::uint64_t ww = extent(iw), wh = extent(ih);
    std::uint64_t x0 = rng.bounded(iw - ww + 1);
    std::uint64_t y0 = rng.bounded(ih - wh + 1);
    windows.push_back(QueryWindow{
        static_cast<std::int64_t>(x0), static_cast<std::int64_t>(y0),
        static_cast<std::int64_t>(x0 + ww - 1),
        static_cast<std::int64_t>(y0 + wh - 1)});
  }

  NaiveQueryOracle oracle(corpus);
  report.windows.resize(windows.size());
  std::atomic<bool> mismatch{false};

  auto worker = [&](std::uint32_t worker_id) {
    using clock = std::chrono::steady_clock;
    for (std::size_t i = worker_id; i < windows.size();
         i += config.threads) {
      BenchWindowResult& r = report.windows[i];
      r.window = windows[i];
      QueryStats stats;
      auto t0 = clock::now();
      std::vector<std::uint64_t> via_index =
          index.query_window(windows[i], &stats);
      auto t1 = clock::now();
      std::vector<std::uint64_t> via_scan = oracle.query(windows[i]);
      auto t2 = clock::now();
      if (via_index != via_scan) {
        mismatch.store(true);
        return;
      }
      r.hits = via_index.size();
      r.ranges_probed = stats.ranges_probed;
      r.entries_touched = stats.entries_touched;
      r.index_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      r.scan_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    }
  };

  if (config.threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(config.threads);
    for (std::uint32_t t = 0; t < config.threads; ++t) {
      pool.emplace_back(worker, t);
    }
    for (std::thread& t : pool) t.join();
  }
  if (mismatch.load()) {
    throw Error("index and reference-scan query results disagree");
  }
  for (const BenchWindowResult& r : report.windows) {
    report.total_index_ms += r.index_ms;
    report.total_scan_ms += r.scan_ms;
  }
  return report;
}

std::string BenchReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["corpus"] = {{"image_width", spec.image_width},
                   {"image_height", spec.image_height},
                   {"polygon_count", spec.polygon_count},
                   {"seed", spec.seed},
                   {"min_radius", spec.min_radius},
                   {"max_radius", spec.max_radius},
                   {"min_vertices", spec.min_vertices},
                   {"max_vertices", spec.max_vertices},
                   {"cell_size", cell_size}};
  doc["bench"] = {{"window_count", config.window_count},
                  {"seed", config.seed},
                  {"threads", config.threads}};
  doc["table"] = {{"entries", table_entries}, {"annotations", annotations}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const BenchWindowResult& r : windows) {
    nlohmann::ordered_json row;
    row["window"] = {r.window.min_x, r.window.min_y, r.window.max_x,
                     r.window.max_y};
    row["hits"] = r.hits;
    row["ranges_probed"] = r.ranges_probed;
    row["entries_touched"] = r.entries_touched;
    row["index_ms"] = r.index_ms;
    row["scan_ms"] = r.scan_ms;
    rows.push_back(std::move(row));
  }
  doc["windows"] = std::move(rows);
  doc["totals"] = {
      {"index_ms", total_index_ms},
      {"scan_ms", total_scan_ms},
      {"speedup", total_index_ms > 0 ? total_scan_ms / total_index_ms : 0}};
  return doc.dump(2);
}

std::string BenchReport::to_table() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %6s %8s %10s %10s %10s\n",
                "window", "hits", "probes", "touched", "index_ms",
                "scan_ms");
  out += line;
  for (const BenchWindowResult& r : windows) {
    char win[64];
    std::snprintf(win, sizeof win, "[%lld,%lld]x[%lld,%lld]",
                  static_cast<long long>(r.window.min_x),
                  static_cast<long long>(r.window.max_x),
                  static_cast<long long>(r.window.min_y),
                  static_cast<long long>(r.window.max_y));
    std::snprintf(line, sizeof line, "%-28s %6llu %8llu %10llu %10.3f %10.3f\n",
                  win, static_cast<unsigned long long>(r.hits),
                  static_cast<unsigned long long>(r.ranges_probed),
                  static_cast<unsigned long long>(r.entries_touched),
                  r.index_ms, r.scan_ms);
    out += line;
  }
  std::snprintf(line, sizeof line,
                "total index %.3f ms, bbox scan %.3f ms over %zu windows\n",
                total_index_ms, total_scan_ms, windows.size());
  out += line;
  return out;
}

}  // namespace hroi
