#include "hroi/range_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hroi/error.hpp"

namespace hroi {

std::uint64_t RangeSet::cell_count() const {
  std::uint64_t total = 0;
  for (const HilbertRange& r : ranges_) total += r.length();
  return total;
}

bool RangeSet::contains(HilbertIndex index) const {
  // First range starting after index; its predecessor is the only candidate.
  auto it = std::upper_bound(
      ranges_.begin(), ranges_.end(), index,
      [](HilbertIndex n, const HilbertRange& r) { return n < r.start; });
  if (it == ranges_.begin()) return false;
  return index <= std::prev(it)->end;
}

RangeSet normalize_ranges(std::vector<HilbertRange> raw) {
  for (const HilbertRange& r : raw) {
    if (r.start > r.end) {
      throw RangeError("inverted range [" + std::to_string(r.start) + ", " +
                       std::to_string(r.end) + "]");
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const HilbertRange& a, const HilbertRange& b) {
              return a.start != b.start ? a.start < b.start : a.end < b.end;
            });
  std::vector<HilbertRange> merged;
  merged.reserve(raw.size());
  for (const HilbertRange& r : raw) {
    if (!merged.empty()) {
      HilbertRange& last = merged.back();
      // Merge when overlapping or directly adjacent; the +1 is guarded so
      // end == UINT64_MAX cannot wrap.
      bool overlaps = r.start <= last.end;
      bool adjacent = !overlaps && last.end != UINT64_MAX &&
                      r.start == last.end + 1;
      if (overlaps || adjacent) {
        if (r.end > last.end) last.end = r.end;
        continue;
      }
    }
    merged.push_back(r);
  }
  return RangeSet(std::move(merged));
}

RangeSet simplify_ranges(const RangeSet& set, std::size_t max_ranges) {
  if (max_ranges < 1) {
    throw ArgumentError("max_ranges must be at least 1");
  }
  const std::vector<HilbertRange>& runs = set.ranges();
  if (runs.size() <= max_ranges) return set;

  // Gap i sits between runs[i] and runs[i+1].  Keep the max_ranges-1 widest
  // gaps (leftmost on ties) open and bridge all the others.
  std::vector<std::size_t> order(runs.size() - 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto gap = [&](std::size_t i) {
    return runs[i + 1].start - runs[i].end - 1;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gap(a) > gap(b); });
  order.resize(max_ranges - 1);

  std::vector<bool> keep_open(runs.size() - 1, false);
  for (std::size_t i : order) keep_open[i] = true;

  std::vector<HilbertRange> out;
  out.reserve(max_ranges);
  out.push_back(runs.front());
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    if (keep_open[i]) {
      out.push_back(runs[i + 1]);
    } else {
      out.back().end = runs[i + 1].end;
    }
  }
  return normalize_ranges(std::move(out));
}

}  // namespace hroi
