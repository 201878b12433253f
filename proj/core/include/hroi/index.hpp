#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hroi/annotation.hpp"
#include "hroi/grid.hpp"
#include "hroi/range_set.hpp"

namespace hroi {

// One row of the flat index: a single Hilbert range owned by an annotation.
// Rows are kept sorted by (start, end, annotation_id).
struct IndexEntry {
  HilbertIndex start = 0;
  HilbertIndex end = 0;
  std::uint64_t annotation_id = 0;

  friend auto operator<=>(const IndexEntry&, const IndexEntry&) = default;
};

// Work counters filled in by queries; entries_touched stays well below the
// table size for selective windows, which is the point of the layout.
struct QueryStats {
  std::uint64_t ranges_probed = 0;    // probe ranges processed
  std::uint64_t entries_touched = 0;  // index rows inspected
};

struct AnnotationMeta {
  std::string name;
  std::string class_label;

  friend bool operator==(const AnnotationMeta&,
                         const AnnotationMeta&) = default;
};

// Range-scan index over annotations on one grid: every annotation range is
// a row in one sorted table, so a 2-D window lookup becomes a handful of
// 1-D interval scans.  Persistable; load verifies what it reads.
class IndexTable {
 public:
  explicit IndexTable(const GridGeometry& grid, std::uint32_t cell_size = 1,
                      std::uint64_t width = 0, std::uint64_t height = 0);

  static IndexTable build(const AnnotationCollection& collection);

  const GridGeometry& grid() const { return grid_; }
  std::uint32_t cell_size() const { return cell_size_; }
  std::uint64_t width() const { return width_; }
  std::uint64_t height() const { return height_; }
  const std::vector<IndexEntry>& entries() const { return entries_; }
  std::size_t annotation_count() const { return catalog_.size(); }

  // Adds one record's rows.  Duplicate id -> ConflictError; ranges past the
  // grid -> RangeError.  Records with no ranges still register in the
  // catalog (an empty region is a valid annotation).
  void insert(const AnnotationRecord& record);

  // nullptr when the id is unknown.
  const AnnotationMeta* find(std::uint64_t id) const;

  // Reassembles the canonical RangeSet of one annotation from its rows;
  // ArgumentError for unknown ids.
  RangeSet ranges_of(std::uint64_t id) const;

  // Ids of annotations whose ranges intersect any probe range / the cells
  // under a pixel window, ascending and deduplicated.
  std::vector<std::uint64_t> query_ranges(const RangeSet& probes,
                                          QueryStats* stats = nullptr) const;
  std::vector<std::uint64_t> query_window(const QueryWindow& window,
                                          QueryStats* stats = nullptr) const;

  // Binary snapshot (magic, frame header, sorted rows, JSON catalog), byte
  // stable for equal content.  load re-verifies ordering, range validity,
  // and entry/catalog agreement: FormatError for foreign files,
  // IntegrityError for corrupted ones.
  void save(std::ostream& out) const;
  static IndexTable load(std::istream& in);
  void save_file(const std::string& path) const;
  static IndexTable load_file(const std::string& path);

  friend bool operator==(const IndexTable&, const IndexTable&) = default;

 private:
  void append_rows(const AnnotationRecord& record);
  void rebuild_sweep();

  GridGeometry grid_;
  std::uint32_t cell_size_;
  std::uint64_t width_;
  std::uint64_t height_;
  std::vector<IndexEntry> entries_;
  // prefix_max_end_[i] = max end of entries_[0..i]; non-decreasing, so the
  // first row that can reach a probe start is found by binary search.
  std::vector<HilbertIndex> prefix_max_end_;
  std::map<std::uint64_t, AnnotationMeta> catalog_;
};

}  // namespace hroi
