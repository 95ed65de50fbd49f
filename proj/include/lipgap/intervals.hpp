#pragma once

#include <span>
#include <vector>

#include "lipgap/rational.hpp"

namespace lipgap {

struct OpenInterval {
  Rational lo, hi;  // lo < hi
  Rational length() const { return hi - lo; }
  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

// Finite union of open intervals, kept as disjoint sorted pieces. Pieces that
// only share an endpoint stay separate since that point is not covered.
class OpenIntervalUnion {
 public:
  void add(const OpenInterval& iv);
  bool contains(const OpenInterval& iv) const;
  Rational measure() const;
  std::span<const OpenInterval> pieces() const { return pieces_; }

 private:
  std::vector<OpenInterval> pieces_;
};

}  // namespace lipgap
