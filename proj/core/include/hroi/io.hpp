#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "hroi/annotation.hpp"
#include "hroi/polygon.hpp"
#include "hroi/raster.hpp"

namespace hroi {

// Textual geometry formats.  Parsers demand coordinates on the half-pixel
// lattice: integers (pixel sample positions) or halves (traced cell
// corners), so emitted geometry parses back unchanged.  Emitters render
// integers bare and halves with one decimal digit.  Malformed text raises
// ParseError, wrong JSON shapes SchemaError, and rings with fewer than 3
// vertices GeometryError.
//
// JSON-based inputs that contain no straight double quote at all have
// typographic quotes (U+201C/U+201D) normalized to '"' first, so material
// that went through word processors still parses.

// WKT.  parse accepts the standard nested form
//   POLYGON ((x y, ...), (hole ...))
// and the flat single-ring shorthand POLYGON (x y, x y, ...); emit writes
// the standard form with explicitly closed rings.
PolygonGeom parse_wkt(std::string_view text);
std::string emit_wkt(const PolygonGeom& polygon);

// GeoJSON polygon object.  The type key is matched case-insensitively and
// members may appear in any order; unknown members are rejected.  Rings may
// be closed or open on input; emit closes them.  Holes are rings 2..n.
PolygonGeom parse_geojson_polygon(std::string_view text);
std::string emit_geojson_polygon(const PolygonGeom& polygon);

// SVG <polygon> points.  parse takes either a whole element/document (the
// points attribute is located) or a bare points list; emit produces a
// minimal <polygon points="..."/> element and refuses holes (FormatError).
PolygonGeom parse_svg_points(std::string_view text);
std::string emit_svg_points(const PolygonGeom& polygon);

// Single-annotation Hilbert JSON: {"name", "type", "Ranges"} with Ranges a
// list of inclusive [start, end] pairs.  The type key is matched case-
// insensitively; an optional "id" is honored.  Ranges are normalized on
// parse.  emit reproduces the reference layout byte for byte: two-space
// indent, one line per key, compact Ranges.
AnnotationRecord parse_hilbert_json(std::string_view text);
std::string emit_hilbert_json(const AnnotationRecord& record);

// PBM bitmaps, P1 (ASCII) and P4 (packed) on input, P4 on output.  The
// image must be square with a power-of-two side, which fixes the grid
// order; writing renders the full grid regardless of the mask window.
RasterMask read_mask_pbm(std::string_view bytes);
std::string write_mask_pbm(const RasterMask& mask);

// Annotation container: one JSON object per line.  The first line carries
// the shared frame {"order", "cell_size", "width", "height"}; every further
// line is a record {"id", "name", "type", "Ranges"}.  Blank lines are
// skipped.  Duplicate ids raise ConflictError, ranges beyond the grid
// RangeError.  write_collection emits records in stored order, one compact
// line each, so equal collections serialize identically.
AnnotationCollection read_collection(std::istream& in);
void write_collection(const AnnotationCollection& collection,
                      std::ostream& out);

}  // namespace hroi
