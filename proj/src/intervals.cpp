#include "lipgap/intervals.hpp"

#include <algorithm>

#include "lipgap/errors.hpp"

namespace lipgap {

void OpenIntervalUnion::add(const OpenInterval& iv) {
  require(iv.lo < iv.hi, "open interval must be nonempty");
  OpenInterval merged = iv;
  std::vector<OpenInterval> out;
  out.reserve(pieces_.size() + 1);
  for (const auto& p : pieces_) {
    if (p.hi <= merged.lo || merged.hi <= p.lo) {
      out.push_back(p);
    } else {
      merged.lo = std::min(merged.lo, p.lo);
      merged.hi = std::max(merged.hi, p.hi);
    }
  }
  auto at = std::lower_bound(out.begin(), out.end(), merged,
                             [](const OpenInterval& a, const OpenInterval& b) { return a.lo < b.lo; });
  out.insert(at, merged);
  pieces_ = std::move(out);
}

bool OpenIntervalUnion::contains(const OpenInterval& iv) const {
  for (const auto& p : pieces_)
    if (p.lo <= iv.lo && iv.hi <= p.hi) return true;
  return false;
}

Rational OpenIntervalUnion::measure() const {
  Rational m = 0;
  for (const auto& p : pieces_) m += p.length();
  return m;
}

}  // namespace lipgap
