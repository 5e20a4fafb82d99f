#pragma once

#include <vector>

namespace clumplab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

// Finite union of disjoint intervals, kept sorted; overlapping or touching input pieces are merged
// and empty ones dropped. Endpoints are not tracked (sets are taken up to measure zero).
class IntervalCollection {
 public:
  IntervalCollection() = default;
  explicit IntervalCollection(std::vector<Interval> pieces);
  IntervalCollection(std::initializer_list<Interval> pieces) : IntervalCollection(std::vector<Interval>(pieces)) {}

  const std::vector<Interval>& intervals() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  double measure() const;
  bool contains(double x) const;
  Interval hull() const;

  IntervalCollection intersect(const Interval& window) const;
  IntervalCollection intersect(const IntervalCollection& other) const;
  IntervalCollection subtract(const IntervalCollection& other) const;
  IntervalCollection unite(const IntervalCollection& other) const;
  // Gaps between consecutive pieces.
  IntervalCollection gaps() const;

 private:
  std::vector<Interval> parts_;
};

}  // namespace clumplab
