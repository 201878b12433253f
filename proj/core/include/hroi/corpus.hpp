#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hroi/annotation.hpp"
#include "hroi/grid.hpp"
#include "hroi/index.hpp"
#include "hroi/polygon.hpp"
#include "hroi/range_set.hpp"
#include "hroi/raster.hpp"

namespace hroi {

// Parameters for the synthetic region generator: star-shaped blobs with
// jittered spokes, meant to look like segmented nuclei at various sizes.
struct CorpusSpec {
  std::uint64_t image_width = 0;   // pixels
  std::uint64_t image_height = 0;
  std::uint32_t polygon_count = 0;
  std::uint64_t seed = 0;
  std::uint32_t min_radius = 4;    // spoke length bounds, pixels
  std::uint32_t max_radius = 32;
  std::uint32_t min_vertices = 8;
  std::uint32_t max_vertices = 24;
};

struct CorpusItem {
  PolygonGeom polygon;
  RangeSet ranges;
};

// A generated corpus plus the frame it lives in.  Item i doubles as
// annotation id i.  Generation is fully determined by (spec, cell_size):
// the same inputs reproduce the same corpus on any platform.
struct SynthCorpus {
  CorpusSpec spec;
  GridGeometry grid{1};
  std::uint32_t cell_size = 1;
  std::vector<CorpusItem> items;

  AnnotationCollection to_collection() const;
};

// Throws ArgumentError for zero counts, radius bounds out of order, blobs
// that cannot fit the image, or fewer than 3 vertices per blob.
SynthCorpus synth_corpus(const CorpusSpec& spec, std::uint32_t cell_size = 1);

// Storage accounting for the two representations: vertices as two 4-byte
// integers each, ranges as two 8-byte indexes each.
struct CorpusStats {
  std::uint64_t polygon_count = 0;
  std::uint64_t total_vertices = 0;
  std::uint64_t total_ranges = 0;
  double vertices_per_polygon = 0;
  double ranges_per_polygon = 0;
  std::uint64_t polygon_bytes = 0;
  std::uint64_t range_bytes = 0;
};

CorpusStats stats_from_totals(std::uint64_t polygons, std::uint64_t vertices,
                              std::uint64_t ranges);
CorpusStats compute_stats(const SynthCorpus& corpus);

// Reference implementation for query results: every polygon is rasterized
// once up front, and a window query walks all annotations, rejects by mask
// bounding box, and scans the surviving cell sets against the window
// rectangle.  Shares no code with the index path beyond the pixel-to-cell
// mapping, which makes it a fair cross-check.
class NaiveQueryOracle {
 public:
  explicit NaiveQueryOracle(const SynthCorpus& corpus);

  // Ascending ids of items whose cells intersect the window.
  std::vector<std::uint64_t> query(const QueryWindow& window) const;

 private:
  GridGeometry grid_;
  std::uint32_t cell_size_;
  std::vector<RasterMask> masks_;
};

struct BenchConfig {
  std::uint32_t window_count = 20;
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;
};

struct BenchWindowResult {
  QueryWindow window;
  std::uint64_t hits = 0;
  std::uint64_t ranges_probed = 0;
  std::uint64_t entries_touched = 0;
  double index_ms = 0;
  double scan_ms = 0;
};

struct BenchReport {
  CorpusSpec spec;
  std::uint32_t cell_size = 1;
  BenchConfig config;
  std::uint64_t table_entries = 0;
  std::uint64_t annotations = 0;
  std::vector<BenchWindowResult> windows;
  double total_index_ms = 0;
  double total_scan_ms = 0;

  // JSON form; everything except the *_ms and speedup fields is a pure
  // function of (spec, cell_size, config), so reports from repeat runs
  // agree once timings are stripped.
  std::string to_json() const;
  std::string to_table() const;
};

// Runs both query paths over seeded random windows and insists on equal id
// sets before reporting any timing (Error on mismatch).  config.threads
// fans windows out over a pool; results do not depend on the thread count.
BenchReport run_bench(const SynthCorpus& corpus, const IndexTable& index,
                      const BenchConfig& config);

}  // namespace hroi
