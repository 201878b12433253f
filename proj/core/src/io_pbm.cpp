#include <bit>
#include <cstdint>
#include <string>

#include "hroi/error.hpp"
#include "hroi/io.hpp"

namespace hroi {
namespace {

// Token scanner for the PBM header and P1 payload: whitespace separates
// tokens and '#' starts a comment running to end of line.
struct PbmScanner {
  std::string_view data;
  std::size_t pos = 0;

  void skip_separators() {
    while (pos < data.size()) {
      char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
                 c == '\f' || c == '\v') {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::uint64_t number() {
    skip_separators();
    if (pos >= data.size() || data[pos] < '0' || data[pos] > '9') {
      throw ParseError("expected number in PBM header", pos);
    }
    std::uint64_t value = 0;
    while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
      value = value * 10 + static_cast<std::uint64_t>(data[pos] - '0');
      if (value > (std::uint64_t{1} << 40)) {
        throw FormatError("unreasonable PBM dimension");
      }
      ++pos;
    }
    return value;
  }
};

GridGeometry grid_for_side(std::uint64_t w, std::uint64_t h) {
  if (w != h) {
    throw FormatError("PBM mask must be square, got " + std::to_string(w) +
                      "x" + std::to_string(h));
  }
  if (w < 2 || !std::has_single_bit(w)) {
    throw FormatError("PBM mask side " + std::to_string(w) +
                      " is not a power of two (>= 2)");
  }
  return GridGeometry(std::bit_width(w) - 1);
}

}  // namespace

RasterMask read_mask_pbm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '1' && bytes[1] != '4')) {
    throw FormatError("not a PBM file (expected P1 or P4)");
  }
  bool packed = bytes[1] == '4';
  PbmScanner s{bytes, 2};
  std::uint64_t w = s.number();
  std::uint64_t h = s.number();
  GridGeometry grid = grid_for_side(w, h);
  RasterMask mask = RasterMask::full(grid);
  std::uint32_t side = grid.side();
  if (packed) {
    // A single whitespace byte terminates the header; rows are packed MSB
    // first, each padded to a whole byte.
    if (s.pos >= bytes.size()) throw FormatError("truncated PBM data");
    ++s.pos;
    std::uint64_t row_bytes = (w + 7) / 8;
    if (bytes.size() - s.pos < row_bytes * h) {
      throw FormatError("truncated PBM data");
    }
    for (std::uint32_t y = 0; y < side; ++y) {
      const char* row = bytes.data() + s.pos + y * row_bytes;
      for (std::uint32_t x = 0; x < side; ++x) {
        if (static_cast<unsigned char>(row[x / 8]) & (0x80u >> (x % 8))) {
          mask.set(x, y);
        }
      }
    }
  } else {
    for (std::uint32_t y = 0; y < side; ++y) {
      for (std::uint32_t x = 0; x < side; ++x) {
        s.skip_separators();
        if (s.pos >= bytes.size()) throw FormatError("truncated PBM data");
        char c = bytes[s.pos++];
        if (c == '1') {
          mask.set(x, y);
        } else if (c != '0') {
          throw ParseError("unexpected character in P1 data", s.pos - 1);
        }
      }
    }
  }
  return mask;
}

std::string write_mask_pbm(const RasterMask& mask) {
  std::uint32_t side = mask.grid().side();
  std::uint64_t row_bytes = (static_cast<std::uint64_t>(side) + 7) / 8;
  std::string out = "P4\n" + std::to_string(side) + " " +
                    std::to_string(side) + "\n";
  std::size_t data_start = out.size();
  out.resize(out.size() + row_bytes * side, '\0');
  mask.for_each_set([&](std::uint32_t x, std::uint32_t y) {
    out[data_start + y * row_bytes + x / 8] |=
        static_cast<char>(0x80u >> (x % 8));
  });
  return out;
}

}  // namespace hroi
