#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "hroi/error.hpp"
#include "hroi/io.hpp"
#include "io_util.hpp"

namespace hroi {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_json(std::string_view text) {
  std::string body = ioutil::normalize_quotes(text);
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(),
                     e.byte > 0 ? e.byte - 1 : 0);
  }
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

// Coordinates must sit on the half-pixel lattice: integer sample
// positions, or the halves produced by tracing cell corners.
double lattice_coord(const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return static_cast<double>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    double doubled = 2 * d;
    if (doubled == static_cast<double>(static_cast<std::int64_t>(doubled))) {
      return d;
    }
  }
  throw SchemaError("coordinate " + v.dump() +
                    " is not on the half-pixel lattice");
}

std::uint64_t range_bound(const json& v) {
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError("range bound " + v.dump() +
                      " is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t unsigned_member(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() &&
      !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError("\"" + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Ring close_stripped(Ring ring) {
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3) {
    throw GeometryError("ring with fewer than 3 vertices");
  }
  return ring;
}

RangeSet parse_ranges_member(const json& v) {
  if (!v.is_array()) throw SchemaError("\"Ranges\" must be an array");
  std::vector<HilbertRange> raw;
  raw.reserve(v.size());
  for (const json& pair : v) {
    if (!pair.is_array() || pair.size() != 2) {
      throw SchemaError("each range must be a [start, end] pair");
    }
    raw.push_back(HilbertRange{range_bound(pair[0]), range_bound(pair[1])});
  }
  return normalize_ranges(std::move(raw));
}

// Shared by the single-record format and container lines; the container
// requires the id, the single-record form merely honors one.
AnnotationRecord parse_record_object(const json& doc, bool require_id) {
  if (!doc.is_object()) {
    throw SchemaError("annotation record must be a JSON object");
  }
  AnnotationRecord rec;
  bool has_name = false, has_type = false, has_ranges = false, has_id = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "name") {
      if (!value.is_string()) throw SchemaError("\"name\" must be a string");
      rec.name = value.get<std::string>();
      has_name = true;
    } else if (iequals(key, "type")) {
      if (!value.is_string()) throw SchemaError("\"type\" must be a string");
      rec.class_label = value.get<std::string>();
      has_type = true;
    } else if (key == "Ranges") {
      rec.ranges = parse_ranges_member(value);
      has_ranges = true;
    } else if (key == "id") {
      rec.id = unsigned_member(value, "id");
      has_id = true;
    } else {
      throw SchemaError("unexpected member \"" + key + "\"");
    }
  }
  if (!has_name || !has_type || !has_ranges) {
    throw SchemaError("record needs \"name\", \"type\" and \"Ranges\"");
  }
  if (require_id && !has_id) {
    throw SchemaError("container record needs an \"id\"");
  }
  return rec;
}

void append_ranges(std::string& out, const RangeSet& ranges) {
  out += '[';
  bool first = true;
  for (const HilbertRange& r : ranges) {
    if (!first) out += ',';
    first = false;
    out += '[';
    out += std::to_string(r.start);
    out += ',';
    out += std::to_string(r.end);
    out += ']';
  }
  out += ']';
}

ojson ranges_json(const RangeSet& ranges) {
  ojson arr = ojson::array();
  for (const HilbertRange& r : ranges) {
    arr.push_back(ojson::array({r.start, r.end}));
  }
  return arr;
}

}  // namespace

PolygonGeom parse_geojson_polygon(std::string_view text) {
  json doc = parse_json(text);
  if (!doc.is_object()) {
    throw SchemaError("geojson polygon must be a JSON object");
  }
  const json* coords = nullptr;
  bool has_type = false;
  for (const auto& [key, value] : doc.items()) {
    if (iequals(key, "type")) {
      if (!value.is_string() || value.get<std::string>() != "Polygon") {
        throw SchemaError("geometry type must be \"Polygon\"");
      }
      has_type = true;
    } else if (key == "coordinates") {
      coords = &value;
    } else {
      throw SchemaError("unexpected member \"" + key + "\"");
    }
  }
  if (!has_type || coords == nullptr) {
    throw SchemaError("polygon needs \"type\" and \"coordinates\"");
  }
  if (!coords->is_array() || coords->empty()) {
    throw SchemaError("\"coordinates\" must be a non-empty array of rings");
  }
  PolygonGeom poly;
  bool first = true;
  for (const json& ring_json : *coords) {
    if (!ring_json.is_array()) throw SchemaError("ring must be an array");
    Ring ring;
    ring.reserve(ring_json.size());
    for (const json& pos : ring_json) {
      if (!pos.is_array() || pos.size() != 2) {
        throw SchemaError("position must be an [x, y] pair");
      }
      ring.push_back(Vertex{lattice_coord(pos[0]), lattice_coord(pos[1])});
    }
    ring = close_stripped(std::move(ring));
    if (first) {
      poly.outer = std::move(ring);
      first = false;
    } else {
      poly.holes.push_back(std::move(ring));
    }
  }
  return poly;
}

std::string emit_geojson_polygon(const PolygonGeom& polygon) {
  if (polygon.outer.empty()) {
    throw GeometryError("cannot serialize a polygon without an outer ring");
  }
  auto ring_json = [](const Ring& ring) {
    ojson arr = ojson::array();
    for (const Vertex& v : ring) {
      ojson pos = ojson::array();
      for (double c : {v.x, v.y}) {
        if (c == static_cast<double>(static_cast<std::int64_t>(c))) {
          pos.push_back(static_cast<std::int64_t>(c));
        } else {
          pos.push_back(c);
        }
      }
      arr.push_back(std::move(pos));
    }
    arr.push_back(arr.front());  // close the ring
    return arr;
  };
  ojson doc;
  doc["type"] = "Polygon";
  ojson rings = ojson::array();
  rings.push_back(ring_json(polygon.outer));
  for (const Ring& hole : polygon.holes) rings.push_back(ring_json(hole));
  doc["coordinates"] = std::move(rings);
  return doc.dump();
}

AnnotationRecord parse_hilbert_json(std::string_view text) {
  return parse_record_object(parse_json(text), /*require_id=*/false);
}

std::string emit_hilbert_json(const AnnotationRecord& record) {
  // Fixed layout, kept byte-stable: callers diff these files.
  std::string out = "{\n  \"name\": ";
  out += json(record.name).dump();
  out += ",\n  \"type\": ";
  out += json(record.class_label).dump();
  out += ",\n  \"Ranges\": ";
  append_ranges(out, record.ranges);
  out += "\n}";
  return out;
}

AnnotationCollection read_collection(std::istream& in) {
  AnnotationCollection col;
  std::unordered_set<std::uint64_t> seen;
  std::string line;
  std::size_t lineno = 0;
  bool has_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json doc = parse_json(line);
      if (!has_header) {
        if (!doc.is_object()) {
          throw SchemaError("container header must be a JSON object");
        }
        bool has_order = false, has_cell = false, has_w = false, has_h = false;
        std::uint64_t order = 0;
        for (const auto& [key, value] : doc.items()) {
          if (key == "order") {
            order = unsigned_member(value, key);
            has_order = true;
          } else if (key == "cell_size") {
            std::uint64_t num = unsigned_member(value, key);
            if (num < 1 || num > UINT32_MAX) {
              throw SchemaError("\"cell_size\" out of range");
            }
            col.cell_size = static_cast<std::uint32_t>(num);
            has_cell = true;
          } else if (key == "width") {
            col.width = unsigned_member(value, key);
            has_w = true;
          } else if (key == "height") {
            col.height = unsigned_member(value, key);
            has_h = true;
          } else {
            throw SchemaError("unexpected member \"" + key + "\"");
          }
        }
        if (!has_order || !has_cell || !has_w || !has_h) {
          throw SchemaError(
              "header needs \"order\", \"cell_size\", \"width\", \"height\"");
        }
        if (order > GridGeometry::kMaxOrder) {
          throw CapacityError("grid order " + std::to_string(order) +
                              " outside [1, 31]");
        }
        col.grid = GridGeometry(static_cast<int>(order));
        has_header = true;
        continue;
      }
      AnnotationRecord rec = parse_record_object(doc, /*require_id=*/true);
      if (!rec.ranges.empty() &&
          rec.ranges.ranges().back().end >= col.grid.cell_count()) {
        throw RangeError("range exceeds the order-" +
                         std::to_string(col.grid.order()) + " grid");
      }
      if (!seen.insert(rec.id).second) {
        throw ConflictError("duplicate annotation id " +
                            std::to_string(rec.id));
      }
      col.records.push_back(std::move(rec));
    } catch (const ParseError& e) {
      throw ParseError("container line " + std::to_string(lineno) + ": " +
                       e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("container line " + std::to_string(lineno) + ": " +
                        e.what());
    } catch (const RangeError& e) {
      throw RangeError("container line " + std::to_string(lineno) + ": " +
                       e.what());
    } catch (const ConflictError& e) {
      throw ConflictError("container line " + std::to_string(lineno) + ": " +
                          e.what());
    }
  }
  if (!has_header) {
    throw ParseError("container is missing its header line");
  }
  return col;
}

void write_collection(const AnnotationCollection& collection,
                      std::ostream& out) {
  ojson header;
  header["order"] = collection.grid.order();
  header["cell_size"] = collection.cell_size;
  header["width"] = collection.width;
  header["height"] = collection.height;
  out << header.dump() << '\n';
  for (const AnnotationRecord& rec : collection.records) {
    ojson doc;
    doc["id"] = rec.id;
    doc["name"] = rec.name;
    doc["type"] = rec.class_label;
    doc["Ranges"] = ranges_json(rec.ranges);
    out << doc.dump() << '\n';
  }
}

}  // namespace hroi
