#include "hroi/index.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "hroi/error.hpp"
#include "hroi/region_codec.hpp"

namespace hroi {
namespace {

constexpr char kMagic[8] = {'H', 'R', 'O', 'I', 'I', 'D', 'X', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw IntegrityError("index file truncated");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw IntegrityError("index file truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

}  // namespace

IndexTable::IndexTable(const GridGeometry& grid, std::uint32_t cell_size,
                       std::uint64_t width, std::uint64_t height)
    : grid_(grid), cell_size_(cell_size), width_(width), height_(height) {
  if (cell_size < 1) throw ArgumentError("cell size must be at least 1");
}

IndexTable IndexTable::build(const AnnotationCollection& collection) {
  IndexTable table(collection.grid, collection.cell_size, collection.width,
                   collection.height);
  for (const AnnotationRecord& rec : collection.records) {
    table.append_rows(rec);
  }
  std::sort(table.entries_.begin(), table.entries_.end());
  table.rebuild_sweep();
  return table;
}

void IndexTable::append_rows(const AnnotationRecord& record) {
  if (catalog_.contains(record.id)) {
    throw ConflictError("duplicate annotation id " +
                        std::to_string(record.id));
  }
  if (!record.ranges.empty() &&
      record.ranges.ranges().back().end >= grid_.cell_count()) {
    throw RangeError("annotation " + std::to_string(record.id) +
                     " has ranges past the order-" +
                     std::to_string(grid_.order()) + " grid");
  }
  catalog_.emplace(record.id, AnnotationMeta{record.name, record.class_label});
  for (const HilbertRange& r : record.ranges) {
    entries_.push_back(IndexEntry{r.start, r.end, record.id});
  }
}

void IndexTable::insert(const AnnotationRecord& record) {
  std::size_t old_size = entries_.size();
  append_rows(record);
  // The new rows arrive sorted (canonical ranges, one id), so one merge
  // restores global order.
  std::inplace_merge(entries_.begin(), entries_.begin() + old_size,
                     entries_.end());
  rebuild_sweep();
}

void IndexTable::rebuild_sweep() {
  prefix_max_end_.resize(entries_.size());
  HilbertIndex running = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    running = i == 0 ? entries_[i].end : std::max(running, entries_[i].end);
    prefix_max_end_[i] = running;
  }
}

const AnnotationMeta* IndexTable::find(std::uint64_t id) const {
  auto it = catalog_.find(id);
  return it == catalog_.end() ? nullptr : &it->second;
}

RangeSet IndexTable::ranges_of(std::uint64_t id) const {
  if (!catalog_.contains(id)) {
    throw ArgumentError("unknown annotation id " + std::to_string(id));
  }
  std::vector<HilbertRange> raw;
  for (const IndexEntry& e : entries_) {
    if (e.annotation_id == id) raw.push_back(HilbertRange{e.start, e.end});
  }
  return normalize_ranges(std::move(raw));
}

std::vector<std::uint64_t> IndexTable::query_ranges(const RangeSet& probes,
                                                    QueryStats* stats) const {
  std::unordered_set<std::uint64_t> hits;
  for (const HilbertRange& probe : probes) {
    if (stats) ++stats->ranges_probed;
    // First row whose running max end reaches the probe: everything before
    // it ends strictly left of the probe and can be skipped wholesale.
    auto lo = std::partition_point(
                  prefix_max_end_.begin(), prefix_max_end_.end(),
                  [&](HilbertIndex m) { return m < probe.start; }) -
              prefix_max_end_.begin();
    // First row starting past the probe: nothing from there on overlaps.
    auto hi = std::upper_bound(entries_.begin(), entries_.end(), probe.end,
                               [](HilbertIndex v, const IndexEntry& e) {
                                 return v < e.start;
                               }) -
              entries_.begin();
    for (auto i = lo; i < hi; ++i) {
      if (stats) ++stats->entries_touched;
      if (entries_[i].end >= probe.start) {
        hits.insert(entries_[i].annotation_id);
      }
    }
  }
  std::vector<std::uint64_t> ids(hits.begin(), hits.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::uint64_t> IndexTable::query_window(const QueryWindow& window,
                                                    QueryStats* stats) const {
  return query_ranges(rect_to_ranges(window, grid_, cell_size_), stats);
}

void IndexTable::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(grid_.order()));
  put_u32(out, cell_size_);
  put_u64(out, width_);
  put_u64(out, height_);
  put_u64(out, entries_.size());
  for (const IndexEntry& e : entries_) {
    put_u64(out, e.start);
    put_u64(out, e.end);
    put_u64(out, e.annotation_id);
  }
  nlohmann::ordered_json catalog = nlohmann::ordered_json::array();
  for (const auto& [id, meta] : catalog_) {
    nlohmann::ordered_json rec;
    rec["id"] = id;
    rec["name"] = meta.name;
    rec["type"] = meta.class_label;
    catalog.push_back(std::move(rec));
  }
  std::string blob = catalog.dump();
  put_u64(out, blob.size());
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw Error("failed to write index stream");
}

IndexTable IndexTable::load(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) ||
      !std::equal(magic, magic + sizeof magic, kMagic)) {
    throw FormatError("not an index file (bad magic)");
  }
  std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw FormatError("unsupported index version " + std::to_string(version));
  }
  std::uint32_t order = get_u32(in);
  if (order < GridGeometry::kMinOrder || order > GridGeometry::kMaxOrder) {
    throw IntegrityError("index header has invalid grid order " +
                         std::to_string(order));
  }
  std::uint32_t cell_size = get_u32(in);
  if (cell_size < 1) {
    throw IntegrityError("index header has zero cell size");
  }
  IndexTable table(GridGeometry(static_cast<int>(order)), cell_size,
                   get_u64(in), get_u64(in));
  std::uint64_t count = get_u64(in);
  table.entries_.reserve(
      static_cast<std::size_t>(std::min<std::uint64_t>(count, 1 << 20)));
  const HilbertIndex cells = table.grid_.cell_count();
  for (std::uint64_t i = 0; i < count; ++i) {
    IndexEntry e;
    e.start = get_u64(in);
    e.end = get_u64(in);
    e.annotation_id = get_u64(in);
    if (e.start > e.end || e.end >= cells) {
      throw IntegrityError("index row " + std::to_string(i) +
                           " has an invalid range");
    }
    if (!table.entries_.empty() && e < table.entries_.back()) {
      throw IntegrityError("index rows out of order at row " +
                           std::to_string(i));
    }
    table.entries_.push_back(e);
  }
  std::uint64_t blob_size = get_u64(in);
  std::string blob(blob_size, '\0');
  if (blob_size > 0 &&
      !in.read(blob.data(), static_cast<std::streamsize>(blob_size))) {
    throw IntegrityError("index file truncated");
  }
  nlohmann::json catalog;
  try {
    catalog = nlohmann::json::parse(blob);
  } catch (const nlohmann::json::parse_error&) {
    throw IntegrityError("index catalog is not valid JSON");
  }
  if (!catalog.is_array()) {
    throw IntegrityError("index catalog has the wrong shape");
  }
  for (const auto& rec : catalog) {
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("name") ||
        !rec.contains("type") || !rec["id"].is_number_unsigned() ||
        !rec["name"].is_string() || !rec["type"].is_string()) {
      throw IntegrityError("index catalog has the wrong shape");
    }
    std::uint64_t id = rec["id"].get<std::uint64_t>();
    if (!table.catalog_
             .emplace(id, AnnotationMeta{rec["name"].get<std::string>(),
                                         rec["type"].get<std::string>()})
             .second) {
      throw IntegrityError("index catalog repeats id " + std::to_string(id));
    }
  }
  // Every row must belong to a cataloged annotation, and each annotation's
  // rows must reassemble a canonical set: ascending, disjoint, and with a
  // true gap between consecutive rows (adjacent rows should have been
  // merged before saving).
  std::map<std::uint64_t, HilbertIndex> last_end;
  for (const IndexEntry& e : table.entries_) {
    if (!table.catalog_.contains(e.annotation_id)) {
      throw IntegrityError("index row references unknown annotation id " +
                           std::to_string(e.annotation_id));
    }
    auto it = last_end.find(e.annotation_id);
    if (it != last_end.end() &&
        (e.start <= it->second || e.start - it->second < 2)) {
      throw IntegrityError("annotation " + std::to_string(e.annotation_id) +
                           " has overlapping or unmerged rows");
    }
    last_end[e.annotation_id] = e.end;
  }
  table.rebuild_sweep();
  return table;
}

void IndexTable::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  save(out);
}

IndexTable IndexTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load(in);
}

}  // namespace hroi
