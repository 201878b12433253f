#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hroi/hilbert.hpp"

namespace hroi {

// One run of consecutive Hilbert indices; both ends are inclusive, so a
// single cell is {n, n}.
struct HilbertRange {
  HilbertIndex start = 0;
  HilbertIndex end = 0;

  std::uint64_t length() const { return end - start + 1; }

  friend bool operator==(const HilbertRange&, const HilbertRange&) = default;
};

// Canonical set of Hilbert ranges: sorted by start, pairwise disjoint, and
// maximally merged (no two ranges touch).  Equal cell sets therefore always
// compare equal.  Instances are only built through normalize_ranges /
// simplify_ranges (or the codec functions), which uphold the invariant.
class RangeSet {
 public:
  RangeSet() = default;

  const std::vector<HilbertRange>& ranges() const { return ranges_; }
  std::size_t size() const { return ranges_.size(); }
  bool empty() const { return ranges_.empty(); }

  // Number of cells covered.  Fits in uint64 even for a full order-31 grid.
  std::uint64_t cell_count() const;

  bool contains(HilbertIndex index) const;

  auto begin() const { return ranges_.begin(); }
  auto end() const { return ranges_.end(); }

  friend bool operator==(const RangeSet&, const RangeSet&) = default;

 private:
  friend RangeSet normalize_ranges(std::vector<HilbertRange> raw);
  explicit RangeSet(std::vector<HilbertRange> canonical)
      : ranges_(std::move(canonical)) {}

  std::vector<HilbertRange> ranges_;
};

// Sorts, merges overlapping and adjacent runs, and drops duplicates.
// Throws RangeError if any input range has start > end.  Input ranges are
// otherwise arbitrary: out of order, overlapping, repeated.
RangeSet normalize_ranges(std::vector<HilbertRange> raw);

// Coarsens a set to at most max_ranges runs by bridging the smallest gaps
// between consecutive runs (ties bridge the rightmost gap first, i.e. the
// kept gaps are the largest ones, leftmost preferred).  The result covers
// the input and adds exactly the bridged gap cells; with max_ranges >=
// set.size() the set is returned unchanged.  Throws ArgumentError when
// max_ranges < 1.
RangeSet simplify_ranges(const RangeSet& set, std::size_t max_ranges);

}  // namespace hroi
