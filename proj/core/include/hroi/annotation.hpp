#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hroi/grid.hpp"
#include "hroi/range_set.hpp"

namespace hroi {

// One named region, stored purely as its canonical Hilbert ranges.
struct AnnotationRecord {
  std::uint64_t id = 0;
  std::string name;
  std::string class_label;  // category such as "tumor" or "nuclear material"
  RangeSet ranges;

  friend bool operator==(const AnnotationRecord&,
                         const AnnotationRecord&) = default;
};

// Records sharing one grid frame, as stored in a container file and fed to
// the index builder.  width/height are the source image extent in pixels.
struct AnnotationCollection {
  GridGeometry grid{1};
  std::uint32_t cell_size = 1;
  std::uint64_t width = 0;
  std::uint64_t height = 0;
  std::vector<AnnotationRecord> records;
};

}  // namespace hroi
