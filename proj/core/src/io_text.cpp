#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "hroi/error.hpp"
#include "hroi/io.hpp"
#include "io_util.hpp"

namespace hroi {

namespace ioutil {

std::string normalize_quotes(std::string_view text) {
  std::string out(text);
  if (out.find('"') != std::string::npos) return out;
  static const std::string open = "\xe2\x80\x9c";   // U+201C
  static const std::string close = "\xe2\x80\x9d";  // U+201D
  for (const std::string& curly : {open, close}) {
    std::size_t pos = 0;
    while ((pos = out.find(curly, pos)) != std::string::npos) {
      out.replace(pos, curly.size(), "\"");
      ++pos;
    }
  }
  return out;
}

std::string format_coord(double v) {
  double rounded = std::nearbyint(v);
  if (v == rounded) {
    return std::to_string(static_cast<long long>(rounded));
  }
  // Non-integer coordinates only ever come from tracing, which emits
  // half-pixel corners; one decimal digit renders them exactly.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace ioutil

namespace {

// Minimal recursive-descent scanner shared by the WKT and SVG readers.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Case-insensitive keyword match.
  bool consume_keyword(std::string_view word) {
    skip_ws();
    if (text_.size() - pos_ < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(text_[pos_ + i])) !=
          std::tolower(static_cast<unsigned char>(word[i]))) {
        return false;
      }
    }
    pos_ += word.size();
    return true;
  }

  // Strict half-pixel coordinate: integers (pixel sample positions) or
  // halves (traced cell corners).  Anything finer is a data error, not
  // something to round.
  double coord() {
    skip_ws();
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    unsigned long long whole = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_,
                                     text_.data() + text_.size(), whole);
    if (ec != std::errc{}) {
      throw ParseError("expected coordinate", start);
    }
    pos_ = ptr - text_.data();
    double value = static_cast<double>(whole);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac_start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      std::string_view frac = text_.substr(frac_start, pos_ - frac_start);
      if (frac == "5") {
        value += 0.5;
      } else if (frac != "0") {
        throw ParseError("coordinate is not on the half-pixel lattice", start);
      }
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw ParseError("coordinate is not on the half-pixel lattice", start);
    }
    return negative ? -value : value;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Drops an explicitly repeated closing vertex and checks the ring is still
// a ring afterwards.
Ring finish_ring(Ring ring, std::size_t err_pos) {
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3) {
    throw GeometryError("ring with fewer than 3 vertices (near byte " +
                        std::to_string(err_pos) + ")");
  }
  return ring;
}

Ring parse_wkt_ring(Scanner& s) {
  Ring ring;
  do {
    double x = s.coord();
    double y = s.coord();
    ring.push_back(Vertex{x, y});
  } while (s.consume(','));
  return ring;
}

void append_wkt_ring(std::string& out, const Ring& ring) {
  out += '(';
  for (const Vertex& v : ring) {
    out += ioutil::format_coord(v.x);
    out += ' ';
    out += ioutil::format_coord(v.y);
    out += ", ";
  }
  // Close the ring explicitly.
  out += ioutil::format_coord(ring.front().x);
  out += ' ';
  out += ioutil::format_coord(ring.front().y);
  out += ')';
}

}  // namespace

PolygonGeom parse_wkt(std::string_view text) {
  Scanner s(text);
  if (!s.consume_keyword("POLYGON")) {
    throw ParseError("expected POLYGON", s.pos());
  }
  s.expect('(');
  PolygonGeom poly;
  if (s.peek() == '(') {
    // Standard nested form: one parenthesized ring per list entry.
    bool first = true;
    do {
      s.expect('(');
      Ring ring = finish_ring(parse_wkt_ring(s), s.pos());
      s.expect(')');
      if (first) {
        poly.outer = std::move(ring);
        first = false;
      } else {
        poly.holes.push_back(std::move(ring));
      }
    } while (s.consume(','));
  } else {
    // Flat shorthand: a single ring without the inner parentheses.
    poly.outer = finish_ring(parse_wkt_ring(s), s.pos());
  }
  s.expect(')');
  if (!s.at_end()) {
    throw ParseError("trailing text after polygon", s.pos());
  }
  return poly;
}

std::string emit_wkt(const PolygonGeom& polygon) {
  if (polygon.outer.empty()) {
    throw GeometryError("cannot serialize a polygon without an outer ring");
  }
  std::string out = "POLYGON (";
  append_wkt_ring(out, polygon.outer);
  for (const Ring& hole : polygon.holes) {
    out += ", ";
    append_wkt_ring(out, hole);
  }
  out += ')';
  return out;
}

PolygonGeom parse_svg_points(std::string_view text) {
  std::string body = ioutil::normalize_quotes(text);
  std::string_view points = body;
  if (body.find('<') != std::string::npos) {
    std::size_t attr = body.find("points");
    if (attr == std::string::npos) {
      throw ParseError("no points attribute found", 0);
    }
    std::size_t eq = body.find('=', attr);
    if (eq == std::string::npos) {
      throw ParseError("points attribute without value", attr);
    }
    std::size_t open = body.find_first_of("\"'", eq);
    if (open == std::string::npos) {
      throw ParseError("points attribute without quoted value", eq);
    }
    std::size_t close = body.find(body[open], open + 1);
    if (close == std::string::npos) {
      throw ParseError("unterminated points attribute", open);
    }
    points = std::string_view(body).substr(open + 1, close - open - 1);
  }
  Scanner s(points);
  Ring ring;
  while (!s.at_end()) {
    double x = s.coord();
    s.consume(',');
    double y = s.coord();
    s.consume(',');
    ring.push_back(Vertex{x, y});
  }
  return PolygonGeom{finish_ring(std::move(ring), s.pos()), {}};
}

std::string emit_svg_points(const PolygonGeom& polygon) {
  if (!polygon.holes.empty()) {
    throw FormatError("svg points cannot represent holes");
  }
  if (polygon.outer.empty()) {
    throw GeometryError("cannot serialize a polygon without an outer ring");
  }
  std::string out = "<polygon points=\"";
  for (const Vertex& v : polygon.outer) {
    out += ioutil::format_coord(v.x);
    out += ',';
    out += ioutil::format_coord(v.y);
    out += ' ';
  }
  out += ioutil::format_coord(polygon.outer.front().x);
  out += ',';
  out += ioutil::format_coord(polygon.outer.front().y);
  out += "\"/>";
  return out;
}

}  // namespace hroi
