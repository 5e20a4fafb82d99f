#include "clumplab/intervals.hpp"

#include <algorithm>

#include "clumplab/error.hpp"

namespace clumplab {

IntervalCollection::IntervalCollection(std::vector<Interval> pieces) {
  std::erase_if(pieces, [](const Interval& i) { return !(i.hi > i.lo); });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& p : pieces) {
    if (!parts_.empty() && p.lo <= parts_.back().hi) {
      parts_.back().hi = std::max(parts_.back().hi, p.hi);
    } else {
      parts_.push_back(p);
    }
  }
}

double IntervalCollection::measure() const {
  double m = 0.0;
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool IntervalCollection::contains(double x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x, [](double v, const Interval& i) { return v < i.lo; });
  if (it == parts_.begin()) return false;
  return std::prev(it)->contains(x);
}

Interval IntervalCollection::hull() const {
  if (parts_.empty()) fail(ErrorKind::degenerate_input, "hull of an empty interval collection");
  return {parts_.front().lo, parts_.back().hi};
}

IntervalCollection IntervalCollection::intersect(const Interval& window) const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    const double lo = std::max(p.lo, window.lo), hi = std::min(p.hi, window.hi);
    if (hi > lo) out.push_back({lo, hi});
  }
  return IntervalCollection(std::move(out));
}

IntervalCollection IntervalCollection::intersect(const IntervalCollection& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < other.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = other.parts_[j];
    const double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a.hi < b.hi) ++i; else ++j;
  }
  return IntervalCollection(std::move(out));
}

IntervalCollection IntervalCollection::subtract(const IntervalCollection& other) const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    double cursor = p.lo;
    for (const auto& q : other.parts_) {
      if (q.hi <= cursor) continue;
      if (q.lo >= p.hi) break;
      if (q.lo > cursor) out.push_back({cursor, q.lo});
      cursor = std::max(cursor, q.hi);
      if (cursor >= p.hi) break;
    }
    if (cursor < p.hi) out.push_back({cursor, p.hi});
  }
  return IntervalCollection(std::move(out));
}

IntervalCollection IntervalCollection::unite(const IntervalCollection& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalCollection(std::move(all));
}

IntervalCollection IntervalCollection::gaps() const {
  std::vector<Interval> out;
  for (std::size_t i = 1; i < parts_.size(); ++i) out.push_back({parts_[i - 1].hi, parts_[i].lo});
  return IntervalCollection(std::move(out));
}

}  // namespace clumplab
